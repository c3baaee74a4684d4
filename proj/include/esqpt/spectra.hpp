#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "esqpt/basis.hpp"
#include "esqpt/potentials.hpp"

namespace esqpt {

/// A model point: potential parameters plus the classicality constant K
/// multiplying the kinetic term (K^2/2) p^2.
struct ModelPoint {
  PotentialSpec spec;
  double K = 1.0;
};

struct Spectrum {
  ModelPoint point;
  std::vector<double> levels;       // ascending
  Eigen::MatrixXd vectors;          // dim x levels.size(); empty when not requested
  std::vector<double> convergence;  // per-level change at the last basis step
  std::vector<int> parity;          // +1 / -1; empty when parity is undefined
  std::optional<Basis1D> basis1d;
  std::optional<Basis2D> basis2d;

  int size() const { return static_cast<int>(levels.size()); }
};

class UnconvergedError : public std::runtime_error {
 public:
  UnconvergedError(std::string msg, std::vector<double> best_errors)
      : std::runtime_error(std::move(msg)), best_errors(std::move(best_errors)) {}
  std::vector<double> best_errors;
};

Eigen::MatrixXd assemble(const ModelPoint& point, const Basis1D& basis);
Eigen::MatrixXd assemble(const ModelPoint& point, const Basis2D& basis);

struct EigenResult {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // empty when want_vectors = false
};

/// Lowest num_levels eigenpairs of a symmetric matrix, ascending; residuals
/// ||Hv - Ev|| are verified against 1e-10 ||H||.
EigenResult eigensolve(const Eigen::MatrixXd& matrix, int num_levels,
                       bool want_vectors = true);

struct ConvergenceOptions {
  double tol = 1e-9;        // per-level eigenvalue change between basis sizes
  int max_basis_1d = 4096;  // 1D basis-size cap
  int max_states_2d = 8000; // 2D total-state cap
  bool want_vectors = true;
  std::optional<double> length_scale;  // overrides the trace-minimized choice
};

/// Diagonalize with basis enlargement (doubling in 1D, x1.5 on both 2D
/// truncations) until the lowest num_levels eigenvalues are stable to tol.
/// Levels are only ever reported from the lower half of the basis range.
Spectrum converged_spectrum(const ModelPoint& point, int num_levels,
                            const ConvergenceOptions& opts = {});

/// Oscillator length selected by minimizing the Hamiltonian trace over a
/// 25-point log grid (closed-form diagonal sums).
double select_length_scale_1d(const ModelPoint& point, int basis_size);
double select_length_scale_2d(const ModelPoint& point, int radial_size, int angular_max);

struct ScalingReport {
  double expected_ratio = 1.0;             // (K1/K2)^{4/3}
  std::vector<double> ratios;              // per-level E_n(K1)/E_n(K2)
  double max_rel_deviation = 0.0;
  bool pass = false;
};

/// Pure-quartic spectral scaling E_n proportional to K^{4/3}; refuses specs
/// with a != 0 or b != 0.
ScalingReport scaling_check(const PotentialSpec& spec, double K1, double K2,
                            int num_levels = 20);

}  // namespace esqpt
