#pragma once

#include <array>
#include <string>
#include <vector>

namespace esqpt {

enum class Model { cusp, collective };

/// Which model plus its two real parameters:
///   cusp        V(x)      = x^4 + a x^2 + b x
///   collective  V(r, phi) = r^4 + a r^2 + b r^3 cos(3 phi),  sextant phi in [0, pi/3]
/// (for the collective model the fields a, b are the usual A, B).
struct PotentialSpec {
  Model model = Model::cusp;
  double a = 0.0;
  double b = 0.0;

  static PotentialSpec cusp(double a, double b) { return {Model::cusp, a, b}; }
  static PotentialSpec collective(double A, double B) { return {Model::collective, A, B}; }

  int dof() const { return model == Model::cusp ? 1 : 2; }
  bool operator==(const PotentialSpec&) const = default;
};

enum class PointKind { minimum, maximum, saddle };

struct StationaryPoint {
  std::array<double, 2> location{};  // {x, 0} for cusp, {r, phi} for collective
  double energy = 0.0;
  PointKind kind = PointKind::minimum;
  std::array<double, 2> hessian_eigenvalues{};  // second entry unused for cusp
  bool degenerate = false;  // a hessian eigenvalue vanishes (spinodal merging)
};

/// Analytic critical loci. For the cusp the spinodal values refer to the
/// canonical first-order path (a, b) = (-1, lambda); lambda_c = 0 holds on
/// both canonical cusp paths. For the collective model the values refer to
/// the scaled path (A, B) = (lambda, 1) and the QPT parabola is
/// B^2 = parabola_coeff * A.
struct CriticalLoci {
  Model model = Model::cusp;
  std::vector<double> critical;
  std::vector<double> spinodal;
  double parabola_coeff = 0.0;
};

double eval_potential(const PotentialSpec& spec, double x_or_r, double phi = 0.0);

/// All real stationary points, sorted by energy (non-decreasing).
std::vector<StationaryPoint> stationary_points(const PotentialSpec& spec);

CriticalLoci critical_loci(Model model);

/// Well-bottom energies E1 <= E2 and barrier-top energy E3 in the
/// phase-coexistence region; outside it only the existing subset (E1 alone
/// for a single well).
std::vector<double> critical_energies(const PotentialSpec& spec);

std::string to_string(PointKind kind);

}  // namespace esqpt
