#include "esqpt/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esqpt {

namespace {

void check_model_point(const ModelPoint& point) {
  if (!(point.K > 0.0) || !std::isfinite(point.K))
    throw std::invalid_argument("model point: K must be positive and finite");
  if (!std::isfinite(point.spec.a) || !std::isfinite(point.spec.b))
    throw std::invalid_argument("model point: non-finite potential parameters");
}

// closed-form diagonal sums for the trace-minimized length scale
double trace_1d(const ModelPoint& point, int nb, double l) {
  const double l2 = l * l;
  double tr = 0.0;
  for (int n = 0; n < nb; ++n) {
    const double kinetic = 0.5 * point.K * point.K * (2.0 * n + 1.0) / (2.0 * l2);
    const double x4 = 0.25 * l2 * l2 * (6.0 * n * n + 6.0 * n + 3.0);
    const double x2 = 0.5 * l2 * (2.0 * n + 1.0);
    tr += kinetic + x4 + point.spec.a * x2;
  }
  return tr;
}

double trace_2d(const ModelPoint& point, int n_max, int k_max, double l) {
  const double l2 = l * l;
  double tr = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const int lam = 3 * k;
    for (int n = 0; n <= n_max; ++n) {
      const double nn = 2.0 * n + lam + 1.0;
      const double kinetic = 0.5 * point.K * point.K * nn / l2;
      const double r2 = l2 * nn;
      const double r4 = l2 * l2 * (nn * nn + n * (n + lam) + (n + 1.0) * (n + lam + 1.0));
      tr += kinetic + r4 + point.spec.a * r2;
    }
  }
  return tr;
}

template <typename TraceFn>
double minimize_trace(const TraceFn& trace, double center) {
  // 25 log-spaced candidates spanning a decade each way
  double best_l = center, best_tr = trace(center);
  for (int i = 0; i < 25; ++i) {
    const double l = center * std::pow(10.0, -1.0 + 2.0 * i / 24.0);
    const double tr = trace(l);
    if (tr < best_tr) {
      best_tr = tr;
      best_l = l;
    }
  }
  return best_l;
}

struct SectorSplit {
  std::vector<int> even, odd;
};

// 1D with b = 0: even and odd basis indices decouple exactly
SectorSplit parity_sectors(int nb) {
  SectorSplit s;
  for (int n = 0; n < nb; n += 2) s.even.push_back(n);
  for (int n = 1; n < nb; n += 2) s.odd.push_back(n);
  return s;
}

EigenResult eigensolve_unchecked(const Eigen::MatrixXd& matrix, int num_levels,
                                 bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      matrix, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: decomposition failed to converge");
  EigenResult result;
  result.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + num_levels);
  if (want_vectors) result.vectors = es.eigenvectors().leftCols(num_levels);
  return result;
}

// solve the two parity blocks separately and merge: keeps doublet eigenvectors
// exactly parity-pure and gives the deterministic even-before-odd tie order
EigenResult eigensolve_parity(const Eigen::MatrixXd& matrix, int num_levels,
                              bool want_vectors, std::vector<int>* parity_out) {
  const int nb = static_cast<int>(matrix.rows());
  const auto sectors = parity_sectors(nb);
  struct Tagged {
    double value;
    int parity;
    int col;
  };
  std::vector<Tagged> tagged;
  Eigen::MatrixXd vec_even, vec_odd;
  int keep = std::min(num_levels, nb);
  for (int s = 0; s < 2; ++s) {
    const auto& idx = s == 0 ? sectors.even : sectors.odd;
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd block(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) block(i, j) = matrix(idx[i], idx[j]);
    const int k = std::min(keep, m);
    auto sub = eigensolve_unchecked(block, k, want_vectors);
    if (want_vectors) (s == 0 ? vec_even : vec_odd) = sub.vectors;
    for (int i = 0; i < k; ++i) tagged.push_back({sub.values[i], s == 0 ? +1 : -1, i});
  }
  const double scale = std::abs(tagged.front().value) + std::abs(tagged.back().value) + 1e-300;
  std::stable_sort(tagged.begin(), tagged.end(), [&](const Tagged& a, const Tagged& b) {
    if (std::abs(a.value - b.value) <= 1e-13 * scale) return a.parity > b.parity;
    return a.value < b.value;
  });
  tagged.resize(std::min<size_t>(tagged.size(), keep));

  EigenResult result;
  if (want_vectors) result.vectors = Eigen::MatrixXd::Zero(nb, tagged.size());
  for (size_t i = 0; i < tagged.size(); ++i) {
    result.values.push_back(tagged[i].value);
    if (parity_out) parity_out->push_back(tagged[i].parity);
    if (want_vectors) {
      const auto& idx = tagged[i].parity > 0 ? sectors.even : sectors.odd;
      const auto& vecs = tagged[i].parity > 0 ? vec_even : vec_odd;
      for (size_t r = 0; r < idx.size(); ++r)
        result.vectors(idx[r], i) = vecs(r, tagged[i].col);
    }
  }
  return result;
}

void verify_residuals(const Eigen::MatrixXd& matrix, const EigenResult& r) {
  if (r.vectors.size() == 0) return;
  const double norm = std::max(std::abs(r.values.front()), std::abs(r.values.back()));
  const Eigen::MatrixXd hv = matrix * r.vectors;
  for (size_t i = 0; i < r.values.size(); ++i) {
    const double res = (hv.col(i) - r.values[i] * r.vectors.col(i)).norm();
    if (res > 1e-10 * std::max(norm, 1e-300))
      throw std::runtime_error("eigensolve: residual exceeds 1e-10 * ||H||");
  }
}

struct SolveOutput {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  std::vector<int> parity;
};

SolveOutput solve_point(const ModelPoint& point, const Basis1D& basis, int num_levels,
                        bool want_vectors) {
  const Eigen::MatrixXd h = assemble(point, basis);
  SolveOutput out;
  if (point.spec.model == Model::cusp && point.spec.b == 0.0) {
    auto r = eigensolve_parity(h, num_levels, want_vectors, &out.parity);
    verify_residuals(h, r);
    out.values = std::move(r.values);
    out.vectors = std::move(r.vectors);
  } else {
    auto r = eigensolve_unchecked(h, num_levels, want_vectors);
    verify_residuals(h, r);
    out.values = std::move(r.values);
    out.vectors = std::move(r.vectors);
  }
  return out;
}

SolveOutput solve_point(const ModelPoint& point, const Basis2D& basis, int num_levels,
                        bool want_vectors) {
  const Eigen::MatrixXd h = assemble(point, basis);
  auto r = eigensolve_unchecked(h, num_levels, want_vectors);
  verify_residuals(h, r);
  SolveOutput out;
  out.values = std::move(r.values);
  out.vectors = std::move(r.vectors);
  return out;
}

}  // namespace

Eigen::MatrixXd assemble(const ModelPoint& point, const Basis1D& basis) {
  check_model_point(point);
  if (point.spec.model != Model::cusp)
    throw std::invalid_argument("assemble: 1D basis requires the cusp model");
  Eigen::MatrixXd h = 0.5 * point.K * point.K * matrix_1d(basis, Op1D::p2);
  h += matrix_1d(basis, Op1D::x4);
  if (point.spec.a != 0.0) h += point.spec.a * matrix_1d(basis, Op1D::x2);
  if (point.spec.b != 0.0) h += point.spec.b * matrix_1d(basis, Op1D::x);
  return h;
}

Eigen::MatrixXd assemble(const ModelPoint& point, const Basis2D& basis) {
  check_model_point(point);
  if (point.spec.model != Model::collective)
    throw std::invalid_argument("assemble: 2D basis requires the collective model");
  Eigen::MatrixXd h = 0.5 * point.K * point.K * matrix_2d(basis, Op2D::kinetic);
  h += matrix_2d(basis, Op2D::r4);
  if (point.spec.a != 0.0) h += point.spec.a * matrix_2d(basis, Op2D::r2);
  if (point.spec.b != 0.0) h += point.spec.b * matrix_2d(basis, Op2D::r3cos3phi);
  return h;
}

EigenResult eigensolve(const Eigen::MatrixXd& matrix, int num_levels, bool want_vectors) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("eigensolve: matrix not square");
  if (num_levels < 1 || num_levels > matrix.rows())
    throw std::invalid_argument("eigensolve: invalid level count");
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, matrix.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("eigensolve: matrix not symmetric");
  auto r = eigensolve_unchecked(matrix, num_levels, want_vectors);
  verify_residuals(matrix, r);
  return r;
}

double select_length_scale_1d(const ModelPoint& point, int basis_size) {
  const double center = std::pow(point.K * point.K / std::max(1, basis_size), 1.0 / 6.0);
  return minimize_trace([&](double l) { return trace_1d(point, basis_size, l); }, center);
}

double select_length_scale_2d(const ModelPoint& point, int radial_size, int angular_max) {
  const int states = (radial_size + 1) * (angular_max + 1);
  const double center = std::pow(point.K * point.K / std::sqrt(1.0 * states), 1.0 / 6.0);
  return minimize_trace([&](double l) { return trace_2d(point, radial_size, angular_max, l); },
                        center);
}

Spectrum converged_spectrum(const ModelPoint& point, int num_levels,
                            const ConvergenceOptions& opts) {
  check_model_point(point);
  if (num_levels < 1) throw std::invalid_argument("converged_spectrum: num_levels < 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("converged_spectrum: tol <= 0");

  Spectrum spectrum;
  spectrum.point = point;
  std::vector<double> prev, best_errors;

  if (point.spec.model == Model::cusp) {
    int nb = std::max(64, 2 * num_levels);
    const double l =
        opts.length_scale ? *opts.length_scale : select_length_scale_1d(point, nb);
    for (;;) {
      if (nb > opts.max_basis_1d)
        throw UnconvergedError("converged_spectrum: 1D basis cap reached", best_errors);
      Basis1D basis{nb, l};
      auto out = solve_point(point, basis, num_levels, opts.want_vectors);
      if (!prev.empty()) {
        best_errors.resize(num_levels);
        double worst = 0.0;
        for (int i = 0; i < num_levels; ++i) {
          best_errors[i] = std::abs(out.values[i] - prev[i]);
          worst = std::max(worst, best_errors[i]);
        }
        if (worst < opts.tol) {
          spectrum.levels = std::move(out.values);
          spectrum.vectors = std::move(out.vectors);
          spectrum.parity = std::move(out.parity);
          spectrum.convergence = best_errors;
          spectrum.basis1d = basis;
          return spectrum;
        }
      }
      prev = std::move(out.values);
      nb *= 2;
    }
  }

  int n_max = std::max(8, static_cast<int>(std::ceil(3.0 * std::sqrt(num_levels))));
  int k_max = std::max(6, static_cast<int>(std::ceil(2.0 * std::sqrt(num_levels))));
  const double l = opts.length_scale ? *opts.length_scale
                                     : select_length_scale_2d(point, n_max, k_max);
  for (;;) {
    if ((n_max + 1) * (k_max + 1) > opts.max_states_2d)
      throw UnconvergedError("converged_spectrum: 2D state cap reached", best_errors);
    Basis2D basis{n_max, k_max, l};
    if (basis.dim() < 2 * num_levels) {
      n_max = static_cast<int>(std::ceil(1.5 * n_max));
      k_max = static_cast<int>(std::ceil(1.5 * k_max));
      continue;
    }
    auto out = solve_point(point, basis, num_levels, opts.want_vectors);
    if (!prev.empty()) {
      best_errors.resize(num_levels);
      double worst = 0.0;
      for (int i = 0; i < num_levels; ++i) {
        best_errors[i] = std::abs(out.values[i] - prev[i]);
        worst = std::max(worst, best_errors[i]);
      }
      if (worst < opts.tol) {
        spectrum.levels = std::move(out.values);
        spectrum.vectors = std::move(out.vectors);
        spectrum.convergence = best_errors;
        spectrum.basis2d = basis;
        return spectrum;
      }
    }
    prev = std::move(out.values);
    n_max = static_cast<int>(std::ceil(1.5 * n_max));
    k_max = static_cast<int>(std::ceil(1.5 * k_max));
  }
}

ScalingReport scaling_check(const PotentialSpec& spec, double K1, double K2,
                            int num_levels) {
  if (spec.a != 0.0 || spec.b != 0.0)
    throw std::invalid_argument("scaling_check: requires the pure quartic (a = b = 0)");
  ScalingReport report;
  report.expected_ratio = std::pow(K1 / K2, 4.0 / 3.0);
  ConvergenceOptions opts;
  opts.want_vectors = false;
  const auto tol_for = [&](double K) {
    return 1e-8 * std::pow(K, 4.0 / 3.0);
  };
  opts.tol = tol_for(K1);
  const auto s1 = converged_spectrum({spec, K1}, num_levels, opts);
  opts.tol = tol_for(K2);
  const auto s2 = converged_spectrum({spec, K2}, num_levels, opts);
  for (int i = 0; i < num_levels; ++i) {
    const double ratio = s1.levels[i] / s2.levels[i];
    report.ratios.push_back(ratio);
    report.max_rel_deviation = std::max(report.max_rel_deviation,
                                        std::abs(ratio / report.expected_ratio - 1.0));
  }
  report.pass = report.max_rel_deviation < 1e-6;
  return report;
}

}  // namespace esqpt
