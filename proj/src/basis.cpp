#include "esqpt/basis.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "esqpt/numerics.hpp"

namespace esqpt {

namespace {

constexpr int kPowerMargin = 4;  // extra rows so x^4 blocks are truncation-free

// exact x matrix (tridiagonal) at unit length scale, dimension m
Eigen::MatrixXd x_matrix(int m) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(m, m);
  for (int n = 0; n + 1 < m; ++n)
    x(n, n + 1) = x(n + 1, n) = std::sqrt((n + 1) / 2.0);
  return x;
}

// normalized Laguerre-function recurrence: phi_n = sqrt(n! Gamma(L+1) /
// Gamma(n+L+1)) L_n^L(u), phi_0 = 1. Values stay O(1)-ish for the sizes used.
void laguerre_normalized(int n_max, double lambda, double u, std::vector<double>& out) {
  out.resize(n_max + 1);
  out[0] = 1.0;
  if (n_max == 0) return;
  out[1] = (lambda + 1.0 - u) / std::sqrt(lambda + 1.0);
  for (int n = 1; n < n_max; ++n) {
    const double a = (2.0 * n + lambda + 1.0 - u) * out[n];
    const double b = std::sqrt(n * (n + lambda)) * out[n - 1];
    out[n + 1] = (a - b) / std::sqrt((n + 1.0) * (n + 1.0 + lambda));
  }
}

// <n,L| r^s |n',L'> / l^s for the 2D-oscillator radial family, via quadrature
// in the alpha = L channel; exact because the integrand is polynomial times
// the channel weight.
Eigen::MatrixXd radial_block(int n_max, int lambda, int lambda_p, int s, int quad_order) {
  const int m = (lambda_p - lambda + s) / 2;
  if ((lambda_p - lambda + s) % 2 != 0)
    throw std::logic_error("radial_block: non-polynomial integrand");
  const auto rule = num::gauss_laguerre_normalized(quad_order, lambda);
  // cross-channel normalization sqrt(Gamma(L+1)/Gamma(L'+1))
  double cross = 1.0;
  for (int j = lambda + 1; j <= lambda_p; ++j) cross /= std::sqrt(static_cast<double>(j));
  for (int j = lambda_p + 1; j <= lambda; ++j) cross *= std::sqrt(static_cast<double>(j));

  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  std::vector<double> phi, phi_p;
  for (int q = 0; q < quad_order; ++q) {
    const double u = rule.nodes[q];
    laguerre_normalized(n_max, lambda, u, phi);
    laguerre_normalized(n_max, lambda_p, u, phi_p);
    const double wum = rule.weights[q] * std::pow(u, m) * cross;
    for (int n = 0; n <= n_max; ++n)
      for (int np = 0; np <= n_max; ++np) block(n, np) += wum * phi[n] * phi_p[np];
  }
  return block;
}

}  // namespace

Eigen::MatrixXd matrix_1d(const Basis1D& basis, Op1D op) {
  if (basis.size < 2) throw std::invalid_argument("matrix_1d: basis size < 2");
  if (!(basis.length_scale > 0.0) || !std::isfinite(basis.length_scale))
    throw std::invalid_argument("matrix_1d: invalid length scale");
  const int nb = basis.size;
  const double l = basis.length_scale;

  if (op == Op1D::p2) {
    // -d^2/dx^2 = [ (2n+1) delta - (a^2 + a+^2) terms ] / (2 l^2), exact
    Eigen::MatrixXd p2 = Eigen::MatrixXd::Zero(nb, nb);
    for (int n = 0; n < nb; ++n) {
      p2(n, n) = (2.0 * n + 1.0) / (2.0 * l * l);
      if (n + 2 < nb) {
        const double v = -std::sqrt((n + 1.0) * (n + 2.0)) / (2.0 * l * l);
        p2(n, n + 2) = p2(n + 2, n) = v;
      }
    }
    return p2;
  }

  const int ext = nb + kPowerMargin;
  const Eigen::MatrixXd x1 = l * x_matrix(ext);
  Eigen::MatrixXd full;
  switch (op) {
    case Op1D::x: full = x1; break;
    case Op1D::x2: full = x1 * x1; break;
    case Op1D::x3: full = x1 * x1 * x1; break;
    case Op1D::x4: {
      const Eigen::MatrixXd x2 = x1 * x1;
      full = x2 * x2;
      break;
    }
    default: throw std::invalid_argument("matrix_1d: unknown operator tag");
  }
  return full.topLeftCorner(nb, nb);
}

Eigen::MatrixXd matrix_2d(const Basis2D& basis, Op2D op) {
  if (basis.radial_size < 1 || basis.angular_max < 0)
    throw std::invalid_argument("matrix_2d: basis too small");
  if (!(basis.length_scale > 0.0) || !std::isfinite(basis.length_scale))
    throw std::invalid_argument("matrix_2d: invalid length scale");
  const int n_max = basis.radial_size;
  const int k_max = basis.angular_max;
  const int nr = n_max + 1;
  const double l = basis.length_scale;
  const int quad_order = n_max + 4;

  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());

  if (op == Op2D::kinetic) {
    // -Laplacian = (2/K^2)(H_osc - w^2 r^2 / 2) collapses to an l-only matrix:
    // diag (2n+Lambda+1)/l^2, off-diag +sqrt((n+1)(n+Lambda+1))/l^2
    for (int k = 0; k <= k_max; ++k) {
      const int lam = 3 * k;
      for (int n = 0; n <= n_max; ++n) {
        mat(basis.index(n, k), basis.index(n, k)) = (2.0 * n + lam + 1.0) / (l * l);
        if (n + 1 <= n_max) {
          const double v = std::sqrt((n + 1.0) * (n + 1.0 + lam)) / (l * l);
          mat(basis.index(n, k), basis.index(n + 1, k)) = v;
          mat(basis.index(n + 1, k), basis.index(n, k)) = v;
        }
      }
    }
    return mat;
  }

  if (op == Op2D::r2 || op == Op2D::r4) {
    const int s = op == Op2D::r2 ? 2 : 4;
    const double ls = std::pow(l, s);
    for (int k = 0; k <= k_max; ++k) {
      const Eigen::MatrixXd block = ls * radial_block(n_max, 3 * k, 3 * k, s, quad_order);
      mat.block(k * nr, k * nr, nr, nr) = block;
    }
    return mat;
  }

  if (op == Op2D::r3cos3phi) {
    // angular overlaps on the Neumann cosine sector: <k|cos 3phi|k+1>
    for (int k = 0; k + 1 <= k_max; ++k) {
      const double ang = k == 0 ? 1.0 / std::sqrt(2.0) : 0.5;
      const Eigen::MatrixXd block =
          (l * l * l * ang) * radial_block(n_max, 3 * k, 3 * (k + 1), 3, quad_order);
      mat.block(k * nr, (k + 1) * nr, nr, nr) = block;
      mat.block((k + 1) * nr, k * nr, nr, nr) = block.transpose();
    }
    return mat;
  }

  throw std::invalid_argument("matrix_2d: unknown operator tag");
}

std::vector<double> hermite_functions(int n_max, double xi) {
  // normalized oscillator functions h_n(xi) e^{-xi^2/2} / sqrt(2^n n! sqrt(pi)),
  // upward recurrence with a rescaling guard against start-up underflow
  std::vector<double> out(n_max + 1, 0.0);
  double log_scale = -0.5 * xi * xi;
  double f0 = std::pow(M_PI, -0.25);
  double f1 = std::sqrt(2.0) * xi * f0;
  const auto emit = [&](int n, double v) {
    out[n] = v * std::exp(log_scale);
  };
  emit(0, f0);
  if (n_max >= 1) emit(1, f1);
  for (int n = 1; n < n_max; ++n) {
    double f2 = std::sqrt(2.0 / (n + 1.0)) * xi * f1 - std::sqrt(n / (n + 1.0)) * f0;
    f0 = f1;
    f1 = f2;
    if (std::abs(f0) > 1e250 || std::abs(f1) > 1e250) {
      f0 *= 1e-250;
      f1 *= 1e-250;
      log_scale += 250.0 * std::log(10.0);
    }
    emit(n + 1, f1);
  }
  return out;
}

std::vector<double> wavefunction_samples(const Eigen::VectorXd& coefficients,
                                         const Basis1D& basis, std::span<const double> xs) {
  if (coefficients.size() != basis.size)
    throw std::invalid_argument("wavefunction_samples: coefficient/basis size mismatch");
  std::vector<double> out;
  out.reserve(xs.size());
  const double l = basis.length_scale;
  for (double x : xs) {
    const auto f = hermite_functions(basis.size - 1, x / l);
    double psi = 0.0;
    for (int n = 0; n < basis.size; ++n) psi += coefficients(n) * f[n];
    psi /= std::sqrt(l);
    out.push_back(psi * psi);
  }
  return out;
}

std::vector<double> wavefunction_samples(const Eigen::VectorXd& coefficients,
                                         const Basis2D& basis,
                                         std::span<const std::array<double, 2>> points) {
  if (coefficients.size() != basis.dim())
    throw std::invalid_argument("wavefunction_samples: coefficient/basis size mismatch");
  const int n_max = basis.radial_size;
  const int k_max = basis.angular_max;
  const double l = basis.length_scale;
  std::vector<double> out;
  out.reserve(points.size());
  std::vector<double> phi_n;
  for (const auto& pt : points) {
    const double r = pt[0], phi = pt[1];
    if (r < 0.0) throw std::domain_error("wavefunction_samples: negative radius");
    const double u = (r / l) * (r / l);
    double psi = 0.0;
    for (int k = 0; k <= k_max; ++k) {
      const int lam = 3 * k;
      laguerre_normalized(n_max, lam, u, phi_n);
      // radial prefactor sqrt(2)/l * u^{lam/2} e^{-u/2} / sqrt(Gamma(lam+1)),
      // assembled in log space to survive large lam
      double log_pref = -0.5 * u - 0.5 * std::lgamma(lam + 1.0);
      if (lam > 0) log_pref += 0.5 * lam * std::log(std::max(u, 1e-300));
      const double radial_scale = std::sqrt(2.0) / l * std::exp(log_pref);
      const double chi = k == 0 ? std::sqrt(3.0 / M_PI)
                                : std::sqrt(6.0 / M_PI) * std::cos(3.0 * k * phi);
      double radial = 0.0;
      for (int n = 0; n <= n_max; ++n)
        radial += coefficients(basis.index(n, k)) * phi_n[n];
      psi += radial * radial_scale * chi;
    }
    out.push_back(psi * psi);
  }
  return out;
}

}  // namespace esqpt
