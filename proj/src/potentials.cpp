#include "esqpt/potentials.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "esqpt/numerics.hpp"

namespace esqpt {

namespace {

constexpr double kDegenerateTol = 1e-8;

PointKind classify_1d(double h, bool& degenerate) {
  if (std::abs(h) < kDegenerateTol) {
    degenerate = true;
    return PointKind::saddle;
  }
  return h > 0.0 ? PointKind::minimum : PointKind::maximum;
}

PointKind classify_2d(double h1, double h2, bool& degenerate) {
  const double scale = std::max({1.0, std::abs(h1), std::abs(h2)});
  if (std::abs(h1) < kDegenerateTol * scale || std::abs(h2) < kDegenerateTol * scale) {
    degenerate = true;
    return PointKind::saddle;
  }
  if (h1 > 0.0 && h2 > 0.0) return PointKind::minimum;
  if (h1 < 0.0 && h2 < 0.0) return PointKind::maximum;
  return PointKind::saddle;
}

std::vector<StationaryPoint> stationary_points_cusp(const PotentialSpec& spec) {
  // V' = 4x^3 + 2a x + b
  std::vector<StationaryPoint> pts;
  for (double x : num::real_cubic_roots(4.0, 0.0, 2.0 * spec.a, spec.b)) {
    StationaryPoint p;
    p.location = {x, 0.0};
    p.energy = eval_potential(spec, x);
    p.hessian_eigenvalues = {12.0 * x * x + 2.0 * spec.a, 0.0};
    p.kind = classify_1d(p.hessian_eigenvalues[0], p.degenerate);
    pts.push_back(p);
  }
  return pts;
}

std::vector<StationaryPoint> stationary_points_collective(const PotentialSpec& spec) {
  const double A = spec.a, B = spec.b;
  std::vector<StationaryPoint> pts;

  {  // origin: V ~ A r^2, hessian diag(2A, 2A) in Cartesian coordinates
    StationaryPoint p;
    p.location = {0.0, 0.0};
    p.energy = 0.0;
    p.hessian_eigenvalues = {2.0 * A, 2.0 * A};
    p.kind = classify_2d(2.0 * A, 2.0 * A, p.degenerate);
    pts.push_back(p);
  }

  // All r > 0 stationary points lie on the rays phi = 0 (s = +1) and
  // phi = pi/3 (s = -1) where cos 3phi is extremal: radial gradient
  // r (4r^2 + 3 s B r + 2A) = 0.
  for (double s : {+1.0, -1.0}) {
    const double phi = s > 0.0 ? 0.0 : M_PI / 3.0;
    assert(std::abs(-3.0 * B * std::sin(3.0 * phi)) < 1e-12);  // angular gradient
    for (double r : num::real_cubic_roots(0.0, 4.0, 3.0 * s * B, 2.0 * A)) {
      if (r <= 1e-12) continue;
      StationaryPoint p;
      p.location = {r, phi};
      p.energy = eval_potential(spec, r, phi);
      // orthonormal-frame hessian on the ray: {d^2V/dr^2, V_phiphi / r^2}
      const double h_rr = 12.0 * r * r + 6.0 * s * B * r + 2.0 * A;
      const double h_pp = -9.0 * s * B * r;
      p.hessian_eigenvalues = {h_rr, h_pp};
      p.kind = classify_2d(h_rr, h_pp, p.degenerate);
      pts.push_back(p);
    }
  }
  return pts;
}

}  // namespace

double eval_potential(const PotentialSpec& spec, double x_or_r, double phi) {
  if (!std::isfinite(x_or_r) || !std::isfinite(phi))
    throw std::domain_error("eval_potential: non-finite coordinates");
  if (spec.model == Model::cusp) {
    const double x = x_or_r;
    return ((x * x + spec.a) * x + spec.b) * x;
  }
  const double r = x_or_r;
  if (r < 0.0) throw std::domain_error("eval_potential: negative radius");
  return r * r * (r * r + spec.a) + spec.b * r * r * r * std::cos(3.0 * phi);
}

std::vector<StationaryPoint> stationary_points(const PotentialSpec& spec) {
  if (!std::isfinite(spec.a) || !std::isfinite(spec.b))
    throw std::domain_error("stationary_points: non-finite parameters");
  auto pts = spec.model == Model::cusp ? stationary_points_cusp(spec)
                                       : stationary_points_collective(spec);
  std::stable_sort(pts.begin(), pts.end(),
                   [](const StationaryPoint& l, const StationaryPoint& r) {
                     return l.energy < r.energy;
                   });
  return pts;
}

CriticalLoci critical_loci(Model model) {
  CriticalLoci loci;
  loci.model = model;
  if (model == Model::cusp) {
    const double spin = 4.0 / (3.0 * std::sqrt(6.0));
    loci.critical = {0.0};
    loci.spinodal = {-spin, spin};
    loci.parabola_coeff = 0.0;
  } else {
    loci.critical = {0.25};
    loci.spinodal = {0.0, 9.0 / 32.0};
    loci.parabola_coeff = 4.0;  // QPT along B^2 = 4A
  }
  return loci;
}

std::vector<double> critical_energies(const PotentialSpec& spec) {
  const auto pts = stationary_points(spec);
  std::vector<double> minima;
  for (const auto& p : pts)
    if (p.kind == PointKind::minimum) minima.push_back(p.energy);
  if (minima.empty()) {
    // degenerate single-well specs (e.g. pure quartic) still have a bottom
    double e_min = pts.empty() ? 0.0 : pts.front().energy;
    return {e_min};
  }
  if (minima.size() < 2) return {minima[0]};
  const double e1 = minima[0], e2 = minima[1];
  // separating barrier: lowest non-minimum stationary energy above E2
  double e3 = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : pts) {
    if (p.kind == PointKind::minimum) continue;
    if (p.energy >= e2) {
      e3 = p.energy;
      break;
    }
  }
  if (std::isnan(e3)) return {e1, e2};
  return {e1, e2, e3};
}

std::string to_string(PointKind kind) {
  switch (kind) {
    case PointKind::minimum: return "minimum";
    case PointKind::maximum: return "maximum";
    case PointKind::saddle: return "saddle";
  }
  return "?";
}

}  // namespace esqpt
