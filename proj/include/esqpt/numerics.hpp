#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace esqpt::num {

/// All real roots of c3*x^3 + c2*x^2 + c1*x + c0 = 0, ascending, deduplicated.
/// Closed-form (trigonometric / Cardano) with a guarded Newton polish, so
/// double roots at degenerate parameters come out clean instead of failing
/// to converge.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Generalized Gauss-Laguerre rule for the *normalized* measure
/// u^alpha e^{-u} du / Gamma(alpha+1) on [0, inf): weights sum to 1.
/// Keeping the measure normalized avoids Gamma overflow at large alpha.
QuadratureRule gauss_laguerre_normalized(int n, double alpha);

/// Adaptive Gauss quadrature (7/15 point pair, recursive bisection).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 1e-14, int max_depth = 48);

/// Bracketed root of f on [lo, hi] (f(lo), f(hi) of opposite sign):
/// bisection with a Newton-free secant polish. Tolerance on x.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-14);

/// log(sum_i exp(v_i)) with max-shift; -inf for empty input.
double logsumexp(std::span<const double> v);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r2 = 0.0;
  int n = 0;
};

/// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// FNV-1a 64-bit content digest (used for output manifests).
std::uint64_t fnv1a64(std::string_view bytes);

/// Run tasks(0..n-1) on `workers` threads; task index order within a thread is
/// unspecified but results must be written to per-index slots by the caller.
void parallel_for(int n, int workers, const std::function<void(int)>& task);

}  // namespace esqpt::num
