#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <vector>

namespace esqpt {

/// Truncated 1D oscillator basis: states n = 0 .. size-1 of length scale l,
/// phi_n(x) = h_n(x/l) exp(-x^2 / 2 l^2) / sqrt(l).
struct Basis1D {
  int size = 2;
  double length_scale = 1.0;
};

/// Truncated basis on the sextant phi in [0, pi/3]: radial 2D-oscillator
/// functions with angular index Lambda = 3k paired with the Neumann cosine
/// sector cos(3 k phi), k = 0 .. angular_max, n = 0 .. radial_size.
/// Column ordering is k-major: index = k * (radial_size + 1) + n.
struct Basis2D {
  int radial_size = 4;   // n_max
  int angular_max = 2;   // k_max
  double length_scale = 1.0;

  int dim() const { return (radial_size + 1) * (angular_max + 1); }
  int index(int n, int k) const { return k * (radial_size + 1) + n; }
  std::array<int, 2> quantum_numbers(int idx) const {
    return {idx % (radial_size + 1), idx / (radial_size + 1)};
  }
};

enum class Op1D { x, x2, x3, x4, p2 };
enum class Op2D { r2, r3cos3phi, r4, kinetic };

/// Exact ladder-operator matrix of the requested operator. Powers of x are
/// formed from the exact x matrix extended by a 4-row internal margin, so the
/// returned block is free of truncation artifacts. p2 is the matrix of
/// -d^2/dx^2 (the K^2/2 factor is applied at Hamiltonian assembly).
Eigen::MatrixXd matrix_1d(const Basis1D& basis, Op1D op);

/// Radial integrals by generalized Gauss-Laguerre quadrature (exact for the
/// polynomial integrands that occur); cos 3phi couples k -> k +- 1 with the
/// exact Neumann-sector overlap. kinetic is the matrix of -Laplacian.
Eigen::MatrixXd matrix_2d(const Basis2D& basis, Op2D op);

/// |psi|^2 on the given grid for psi = sum_n coefficients[n] phi_n.
std::vector<double> wavefunction_samples(const Eigen::VectorXd& coefficients,
                                         const Basis1D& basis, std::span<const double> xs);
std::vector<double> wavefunction_samples(const Eigen::VectorXd& coefficients,
                                         const Basis2D& basis,
                                         std::span<const std::array<double, 2>> points);

/// Basis-function values themselves (used by the samplers and the tests).
std::vector<double> hermite_functions(int n_max, double xi);

}  // namespace esqpt
