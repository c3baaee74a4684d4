#include "esqpt/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "esqpt/numerics.hpp"

namespace esqpt {

namespace {

constexpr double kCriticalShift = 1e-9;  // one-sided limit offset at critical E

// ---------------------------------------------------------------------------
// allowed-region bookkeeping shared by both dimensionalities
// ---------------------------------------------------------------------------

// Roots of V(x) - E on [lo, hi] given interior breakpoints where V' = 0.
// Each monotone panel is bracketed, so degenerate parameters cannot derail
// the search.
std::vector<double> crossing_points(const std::function<double(double)>& V, double E,
                                    double lo, double hi,
                                    std::span<const double> breaks) {
  std::vector<double> panel{lo};
  for (double b : breaks)
    if (b > lo && b < hi) panel.push_back(b);
  panel.push_back(hi);

  std::vector<double> roots;
  for (size_t i = 0; i + 1 < panel.size(); ++i) {
    const double a = panel[i], b = panel[i + 1];
    const double fa = V(a) - E, fb = V(b) - E;
    if (fa == 0.0) roots.push_back(a);
    if ((fa > 0.0) != (fb > 0.0))
      roots.push_back(num::find_root([&](double x) { return V(x) - E; }, a, b));
  }
  if (!roots.empty() && V(hi) - E == 0.0) roots.push_back(hi);
  std::sort(roots.begin(), roots.end());
  return roots;
}

struct Interval {
  double lo, hi;
  bool lo_turning, hi_turning;  // endpoint is a V = E turning point
};

// Union of intervals {V <= E} inside [lo, hi].
std::vector<Interval> allowed_intervals(const std::function<double(double)>& V, double E,
                                        double lo, double hi,
                                        std::span<const double> breaks) {
  const auto roots = crossing_points(V, E, lo, hi, breaks);
  std::vector<double> edges{lo};
  edges.insert(edges.end(), roots.begin(), roots.end());
  edges.push_back(hi);
  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (b - a < 1e-14 * std::max(1.0, std::abs(a))) continue;
    if (V(0.5 * (a + b)) <= E) {
      const bool a_turn = i > 0 || std::abs(V(a) - E) < 1e-12 * std::max(1.0, std::abs(E));
      const bool b_turn =
          i + 2 < edges.size() || std::abs(V(b) - E) < 1e-12 * std::max(1.0, std::abs(E));
      if (!out.empty() && std::abs(out.back().hi - a) < 1e-14 * std::max(1.0, std::abs(a))) {
        out.back().hi = b;  // merge across a grazing root
        out.back().hi_turning = b_turn;
      } else {
        out.push_back({a, b, a_turn, b_turn});
      }
    }
  }
  return out;
}

// Integrate f over [a, b]; a square-root-absorbing substitution x = a + t^2
// (resp. b - t^2) is applied at each end flagged as a turning point, which
// removes the integrable 1/sqrt endpoint behavior of the V(E) integrand and
// the sqrt cusp of the W(E) integrand.
double integrate_with_turning_ends(const std::function<double(double)>& f, double a,
                                   double b, bool a_turn, bool b_turn, double rel_tol) {
  if (b <= a) return 0.0;
  const double mid = 0.5 * (a + b);
  double total = 0.0;
  if (a_turn) {
    const double tmax = std::sqrt(mid - a);
    total += num::integrate([&](double t) { return 2.0 * t * f(a + t * t); }, 0.0, tmax,
                            rel_tol);
  } else {
    total += num::integrate(f, a, mid, rel_tol);
  }
  if (b_turn) {
    const double tmax = std::sqrt(b - mid);
    total += num::integrate([&](double t) { return 2.0 * t * f(b - t * t); }, 0.0, tmax,
                            rel_tol);
  } else {
    total += num::integrate(f, mid, b, rel_tol);
  }
  return total;
}

// ---------------------------------------------------------------------------
// f = 1 (cusp)
// ---------------------------------------------------------------------------

// outer bound with V(+-X) > E, grown geometrically from a Cauchy-style guess
double outer_bound_1d(const PotentialSpec& spec, double E) {
  double X = 1.5 + std::sqrt(std::abs(spec.a)) + std::cbrt(std::abs(spec.b)) +
             std::pow(std::abs(E), 0.25);
  while (eval_potential(spec, X) <= E || eval_potential(spec, -X) <= E) X *= 2.0;
  return X;
}

std::vector<double> stationary_xs(const PotentialSpec& spec) {
  return num::real_cubic_roots(4.0, 0.0, 2.0 * spec.a, spec.b);
}

// splits every allowed interval at interior stationary points so each piece
// has at most one singular (turning) end
template <typename PieceFn>
void for_each_piece_1d(const PotentialSpec& spec, double E, const PieceFn& piece) {
  const auto V = [&](double x) { return eval_potential(spec, x); };
  const auto breaks = stationary_xs(spec);
  const double X = outer_bound_1d(spec, E);
  for (const auto& iv : allowed_intervals(V, E, -X, X, breaks)) {
    std::vector<double> cuts{iv.lo};
    for (double s : breaks)
      if (s > iv.lo && s < iv.hi) cuts.push_back(s);
    cuts.push_back(iv.hi);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      const bool left_turn = (i == 0) && iv.lo_turning;
      const bool right_turn = (i + 2 == cuts.size()) && iv.hi_turning;
      piece(cuts[i], cuts[i + 1], left_turn, right_turn);
    }
  }
}

double w_volume_1d(const PotentialSpec& spec, double E) {
  double total = 0.0;
  for_each_piece_1d(spec, E, [&](double a, double b, bool at, bool bt) {
    const auto f = [&](double x) {
      return std::sqrt(std::max(0.0, E - eval_potential(spec, x)));
    };
    total += integrate_with_turning_ends(f, a, b, at, bt, 1e-11);
  });
  return 2.0 * std::sqrt(2.0) * total;
}

double v_volume_1d(const PotentialSpec& spec, double E) {
  double total = 0.0;
  for_each_piece_1d(spec, E, [&](double a, double b, bool at, bool bt) {
    const auto f = [&](double x) {
      const double h = E - eval_potential(spec, x);
      return 1.0 / std::sqrt(std::max(h, 1e-300));
    };
    total += integrate_with_turning_ends(f, a, b, at, bt, 1e-11);
  });
  return std::sqrt(2.0) * total;
}

// ---------------------------------------------------------------------------
// f = 2 (collective)
// ---------------------------------------------------------------------------

// for fixed phi the potential restricted to the ray is a quartic in r
struct RaySlice {
  double A, Bc;  // V(r) = r^4 + Bc r^3 + A r^2
  double operator()(double r) const { return r * r * (r * r + Bc * r + A); }
  std::vector<double> breaks() const {  // radial stationary points (r > 0)
    std::vector<double> out;
    for (double r : num::real_cubic_roots(0.0, 4.0, 3.0 * Bc, 2.0 * A))
      if (r > 0.0) out.push_back(r);
    return out;
  }
};

double outer_bound_ray(const RaySlice& ray, double E) {
  double R = 1.5 + std::sqrt(std::abs(ray.A)) + std::abs(ray.Bc) + std::pow(std::abs(E), 0.25);
  while (ray(R) <= E) R *= 2.0;
  return R;
}

// per-phi radial pieces: the area and the (E - V) moment are polynomials in
// r, so only the interval endpoints carry numerical error
struct PhiSlice {
  double area = 0.0;    // Int r dr over {V <= E}
  double wmoment = 0.0; // Int (E - V) r dr over {V <= E}
};

PhiSlice phi_slice(const PotentialSpec& spec, double E, double phi) {
  const RaySlice ray{spec.a, spec.b * std::cos(3.0 * phi)};
  PhiSlice s;
  if (E <= 0.0 && ray.breaks().empty()) return s;  // nothing allowed on this ray
  const double R = outer_bound_ray(ray, E);
  const auto breaks = ray.breaks();
  for (const auto& iv : allowed_intervals([&](double r) { return ray(r); }, E, 0.0, R,
                                          breaks)) {
    const auto P = [&](double r) {  // antiderivative of (E - V(r)) r
      const double r2 = r * r;
      return E * r2 / 2.0 - r2 * r2 * (r2 / 6.0 + ray.Bc * r / 5.0 + ray.A / 4.0);
    };
    s.area += 0.5 * (iv.hi * iv.hi - iv.lo * iv.lo);
    s.wmoment += P(iv.hi) - P(iv.lo);
  }
  return s;
}

// angles where the interval topology can change: ray extremum values crossing
// E, and discriminant zeros where the r > 0 extremum pair is born
std::vector<double> critical_angles(const PotentialSpec& spec, double E) {
  const double A = spec.a, B = spec.b;
  std::vector<double> angles;
  const double phi_max = M_PI / 3.0;
  if (B != 0.0) {
    const double c2 = 32.0 * A / (9.0 * B * B);
    if (c2 >= 0.0 && c2 <= 1.0) {
      const double c0 = std::sqrt(c2);
      for (double c : {c0, -c0}) {
        const double phi = std::acos(std::clamp(c, -1.0, 1.0)) / 3.0;
        if (phi > 0.0 && phi < phi_max) angles.push_back(phi);
      }
    }
  }
  // scan each extremum branch for V(r*, phi) = E sign changes
  const int n_scan = 512;
  const auto branch_value = [&](double phi, int which) -> double {
    const RaySlice ray{A, B * std::cos(3.0 * phi)};
    const auto br = ray.breaks();
    if (static_cast<int>(br.size()) <= which) return std::numeric_limits<double>::quiet_NaN();
    return ray(br[which]) - E;
  };
  for (int which = 0; which < 2; ++which) {
    double prev_phi = 0.0, prev = branch_value(0.0, which);
    for (int i = 1; i <= n_scan; ++i) {
      const double phi = phi_max * i / n_scan;
      const double cur = branch_value(phi, which);
      if (std::isfinite(prev) && std::isfinite(cur) && (prev > 0.0) != (cur > 0.0)) {
        angles.push_back(num::find_root([&](double p) { return branch_value(p, which); },
                                        prev_phi, phi, 1e-13));
      }
      prev_phi = phi;
      prev = cur;
    }
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               angles.end());
  return angles;
}

// integrate g over the sextant, splitting at topology-change angles and
// absorbing the sqrt kinks there with the same t^2 substitution
double sextant_integral(const PotentialSpec& spec, double E,
                        const std::function<double(double)>& g) {
  std::vector<double> edges{0.0};
  for (double a : critical_angles(spec, E)) edges.push_back(a);
  edges.push_back(M_PI / 3.0);
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    total += integrate_with_turning_ends(g, edges[i], edges[i + 1], true, true, 1e-10);
  return total;
}

double w_volume_2d(const PotentialSpec& spec, double E) {
  return 2.0 * M_PI *
         sextant_integral(spec, E, [&](double phi) { return phi_slice(spec, E, phi).wmoment; });
}

double v_volume_2d(const PotentialSpec& spec, double E) {
  return 2.0 * M_PI *
         sextant_integral(spec, E, [&](double phi) { return phi_slice(spec, E, phi).area; });
}

// ---------------------------------------------------------------------------

double global_min_energy(const PotentialSpec& spec) {
  double e = spec.model == Model::collective ? 0.0 : std::numeric_limits<double>::infinity();
  for (const auto& p : stationary_points(spec)) e = std::min(e, p.energy);
  return e;
}

// shift queries that sit exactly on a stationary energy to its upper side;
// 1D maxima instead raise the log-singularity error from v_volume
double resolve_query_energy(const PotentialSpec& spec, double E, bool for_density) {
  for (const auto& p : stationary_points(spec)) {
    const double scale = std::max(1.0, std::abs(p.energy));
    if (std::abs(E - p.energy) < 1e-12 * scale) {
      if (for_density && spec.model == Model::cusp && p.kind == PointKind::maximum)
        throw LogSingularityError(p.energy);
      return p.energy + kCriticalShift;
    }
  }
  return E;
}

}  // namespace

double w_volume(const PotentialSpec& spec, double E) {
  if (!std::isfinite(E)) throw std::domain_error("w_volume: non-finite energy");
  if (E <= global_min_energy(spec)) return 0.0;
  E = resolve_query_energy(spec, E, false);
  return spec.model == Model::cusp ? w_volume_1d(spec, E) : w_volume_2d(spec, E);
}

double v_volume(const PotentialSpec& spec, double E) {
  if (!std::isfinite(E)) throw std::domain_error("v_volume: non-finite energy");
  if (E < global_min_energy(spec)) return 0.0;
  E = resolve_query_energy(spec, E, true);
  return spec.model == Model::cusp ? v_volume_1d(spec, E) : v_volume_2d(spec, E);
}

double smoothed_density(const PotentialSpec& spec, double K, double E) {
  if (!(K > 0.0)) throw std::domain_error("smoothed_density: K must be positive");
  const double denom = std::pow(2.0 * M_PI * K, spec.dof());
  return v_volume(spec, E) / denom;
}

SingularityKind classify_singularity(const PotentialSpec& spec, const StationaryPoint& sp) {
  if (spec.model == Model::cusp) {
    if (sp.kind == PointKind::minimum) return SingularityKind::jump;
    if (sp.kind == PointKind::maximum) return SingularityKind::log_divergence;
    return SingularityKind::smooth;
  }
  if (sp.kind == PointKind::minimum || sp.kind == PointKind::maximum ||
      sp.kind == PointKind::saddle)
    return SingularityKind::slope_kink;
  return SingularityKind::smooth;
}

VolumeCurve volume_curve(const PotentialSpec& spec, std::span<const double> energies) {
  VolumeCurve curve;
  curve.f = spec.dof();
  curve.energies.assign(energies.begin(), energies.end());
  curve.W.reserve(energies.size());
  curve.V.reserve(energies.size());
  for (double E : energies) {
    curve.W.push_back(w_volume(spec, E));
    double v;
    try {
      v = v_volume(spec, E);
    } catch (const LogSingularityError&) {
      v = std::numeric_limits<double>::infinity();
    }
    curve.V.push_back(v);
  }
  return curve;
}

std::string to_string(SingularityKind kind) {
  switch (kind) {
    case SingularityKind::jump: return "jump";
    case SingularityKind::log_divergence: return "log_divergence";
    case SingularityKind::slope_kink: return "slope_kink";
    case SingularityKind::smooth: return "smooth";
  }
  return "?";
}

}  // namespace esqpt
