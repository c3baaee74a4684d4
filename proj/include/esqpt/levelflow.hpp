#pragma once

#include <optional>
#include <span>
#include <vector>

#include "esqpt/spectra.hpp"

namespace esqpt {

enum class PathKind { cusp_v1, cusp_v2, collective };

/// Canonical one-parameter paths through the model space:
///   cusp_v1     (a, b) = (-1, lambda)   dH/dlambda = x
///   cusp_v2     (a, b) = (lambda, 0)    dH/dlambda = x^2
///   collective  (A, B) = (lambda, 1)    dH/dlambda = r^2
struct ParameterPath {
  PathKind kind = PathKind::cusp_v1;
  std::vector<double> grid;  // strictly ascending lambdas

  PotentialSpec at(double lambda) const;
  Model model() const { return kind == PathKind::collective ? Model::collective : Model::cusp; }
  /// lambda of a spec on this path; throws if the spec is off-path.
  double lambda_of(const PotentialSpec& spec) const;
};

ParameterPath make_path(PathKind kind, double lambda_min, double lambda_max, int points);

struct LevelFlow {
  ParameterPath path;
  double K = 1.0;
  int num_levels = 0;
  // indexed [lambda][level]
  std::vector<std::vector<double>> energies;
  std::vector<std::vector<double>> slopes;
  std::vector<std::vector<double>> curvatures;
  std::vector<std::vector<int>> parity;          // empty rows when undefined
  std::vector<std::vector<double>> left_weight;  // empty rows when single-well
};

struct SweepOptions {
  double tol = 1e-9;
  int workers = 1;
  bool localization = true;  // compute well weights where a double well exists
  int max_basis_1d = 4096;
  int max_states_2d = 8000;
};

/// Converged spectrum at every grid lambda with slopes, curvatures and labels
/// attached; levels are associated across lambda by ascending index.
LevelFlow sweep(const ParameterPath& path, double K, int num_levels,
                const SweepOptions& opts = {});

/// Hellmann-Feynman slopes dE_i/dlambda = <i| dH/dlambda |i>.
std::vector<double> hf_slope(const Spectrum& spectrum, const ParameterPath& path);

struct CurvatureResult {
  std::vector<double> value;       // second-order perturbation sum
  std::vector<double> tail_bound;  // magnitude bound on the truncated tail
};

/// d^2 E_i / dlambda^2 = 2 sum_{j != i} |<i|dH/dlambda|j>|^2 / (E_i - E_j)
/// over the computed window; pairs closer than 1e-12 * scale are rotated to
/// the coupling-free degenerate frame (their mutual term drops out).
CurvatureResult curvature(const Spectrum& spectrum, const ParameterPath& path);

struct AvoidedCrossing {
  int lower_level = 0;   // gap between lower_level and lower_level + 1
  double lambda = 0.0;   // refined location
  double gap = 0.0;      // refined minimal gap (> 0 for avoided crossings)
  int sector = 0;        // parity sector (+1/-1) or 0 when sectors are absent
};

/// Local minima of same-sector adjacent gaps, refined by a parabolic fit of
/// the squared gap (exact for an isolated two-level crossing).
std::vector<AvoidedCrossing> avoided_crossings(const LevelFlow& flow);

struct WellWeights {
  double left = 0.0;
  double right = 0.0;
};

/// Probability weight of |psi|^2 on each side of the barrier coordinate, for
/// every level of a 1D double-well spectrum. Weights sum to 1 within 1e-6.
std::vector<WellWeights> localization(const Spectrum& spectrum, double barrier_x);

/// Parity labels from eigenvector support; requires a cusp spec with b = 0.
std::vector<int> parity_label(const Spectrum& spectrum);

}  // namespace esqpt
