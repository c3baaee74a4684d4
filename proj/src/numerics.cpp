#include "esqpt/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace esqpt::num {

namespace {

// One guarded Newton step on the cubic; skipped when the derivative is too
// small (double root), where the closed form is already the right answer.
double polish_cubic(double c3, double c2, double c1, double c0, double x) {
  const double f = ((c3 * x + c2) * x + c1) * x + c0;
  const double df = (3.0 * c3 * x + 2.0 * c2) * x + c1;
  const double scale = std::abs(c3) * x * x * x;
  if (std::abs(df) > 1e-8 * std::max(1.0, std::abs(scale))) x -= f / df;
  return x;
}

}  // namespace

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0) {
    // quadratic fallback
    if (c2 == 0.0) {
      if (c1 == 0.0) return {};
      return {-c0 / c1};
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return {};
    const double s = std::sqrt(disc);
    const double q = -0.5 * (c1 + std::copysign(s, c1));
    std::vector<double> r;
    if (q != 0.0) r.push_back(c0 / q);
    r.push_back(q / c2);
    std::sort(r.begin(), r.end());
    return r;
  }

  // depressed form t^3 + p t + q with x = t - c2/(3 c3)
  const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

  std::vector<double> roots;
  const double scale = std::max({1.0, std::abs(p), std::abs(q)});
  if (std::abs(p) < 1e-14 * scale && std::abs(q) < 1e-14 * scale * scale) {
    roots = {0.0};
  } else {
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    const double disc_scale = std::max(std::abs(4.0 * p * p * p), 27.0 * q * q);
    if (std::abs(disc) < 1e-12 * disc_scale && p < 0.0) {
      // double root boundary
      const double t1 = 3.0 * q / p;
      const double t2 = -1.5 * q / p;
      roots = {t1, t2, t2};
    } else if (disc > 0.0) {
      const double m = 2.0 * std::sqrt(-p / 3.0);
      double arg = 3.0 * q / (p * m);
      arg = std::clamp(arg, -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0));
    } else {
      const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
      roots = {std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s)};
    }
  }

  for (double& t : roots) t = polish_cubic(c3, c2, c1, c0, t - shift);
  std::sort(roots.begin(), roots.end());

  // deduplicate double roots that came out of both trig branches
  std::vector<double> out;
  const double span = std::max(1.0, std::abs(roots.back() - roots.front()));
  for (double r : roots)
    if (out.empty() || r - out.back() > 1e-10 * span) out.push_back(r);
  return out;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

QuadratureRule gauss_laguerre_normalized(int n, double alpha) {
  if (n < 1) throw std::invalid_argument("gauss_laguerre: n < 1");
  if (alpha <= -1.0) throw std::invalid_argument("gauss_laguerre: alpha <= -1");
  // Golub-Welsch on the Laguerre Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2.0 * i + alpha + 1.0;
    if (i + 1 < n) {
      const double off = std::sqrt((i + 1.0) * (i + 1.0 + alpha));
      J(i, i + 1) = J(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;  // normalized measure: mu_0 = 1
  }
  return rule;
}

namespace {

// 7-point Gauss nested in 15-point Gauss is good enough as an error pair here;
// nodes computed once.
const QuadratureRule& g7() {
  static const QuadratureRule r = gauss_legendre(7);
  return r;
}
const QuadratureRule& g15() {
  static const QuadratureRule r = gauss_legendre(15);
  return r;
}

double apply_rule(const QuadratureRule& r, const std::function<double(double)>& f,
                  double a, double b) {
  const double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + hw * r.nodes[i]);
  return s * hw;
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int depth) {
  const double coarse = apply_rule(g7(), f, a, b);
  const double fine = apply_rule(g15(), f, a, b);
  const double err = std::abs(fine - coarse);
  if (err <= std::max(abs_tol, rel_tol * std::abs(fine)) || depth <= 0) return fine;
  const double mid = 0.5 * (a + b);
  return integrate_rec(f, a, mid, rel_tol, abs_tol * 0.5, depth - 1) +
         integrate_rec(f, mid, b, rel_tol, abs_tol * 0.5, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  return integrate_rec(f, a, b, rel_tol, abs_tol, max_depth);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("find_root: endpoints do not bracket a root");
  for (int it = 0; it < 200; ++it) {
    // secant candidate, safeguarded by the bracket
    double mid = 0.5 * (lo + hi);
    const double denom = fhi - flo;
    if (denom != 0.0) {
      const double sec = lo - flo * (hi - lo) / denom;
      if (sec > lo && sec < hi) mid = sec;
    }
    const double fm = f(mid);
    if (fm == 0.0 || hi - lo < x_tol * std::max(1.0, std::abs(mid))) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double logsumexp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 matched points");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit fit;
  fit.n = n;
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void parallel_for(int n, int workers, const std::function<void(int)>& task) {
  if (n <= 0) return;
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace esqpt::num
