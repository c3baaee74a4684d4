#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "esqpt/potentials.hpp"

namespace esqpt {

/// Thrown when the 1D phase-space volume density is queried exactly at a
/// barrier-top energy, where it diverges logarithmically.
class LogSingularityError : public std::domain_error {
 public:
  explicit LogSingularityError(double energy)
      : std::domain_error("v_volume: logarithmic singularity at barrier-top energy"),
        energy(energy) {}
  double energy;
};

struct VolumeCurve {
  std::vector<double> energies;  // ascending grid
  std::vector<double> W;         // phase-space volume below E
  std::vector<double> V;         // dW/dE
  int f = 1;                     // degrees of freedom
};

/// Phase-space volume W(E) of H = p^2/2 + V below energy E.
///   f=1:  2*sqrt(2) Int_{V<=E} sqrt(E - V) dx
///   f=2:  2*pi Int_{V<=E} (E - V) r dr dphi over the sextant phi in [0, pi/3]
/// Returns 0 below the global minimum. Queries exactly at a stationary energy
/// are answered as one-sided limits at E + 1e-9.
double w_volume(const PotentialSpec& spec, double E);

/// Density of phase-space volume V(E) = dW/dE.
///   f=1:  sqrt(2) Int dx / sqrt(E - V), turning-point singularities absorbed
///   f=2:  2*pi * (area of {V <= E} within the sextant)
/// Throws LogSingularityError at a 1D barrier-top energy.
double v_volume(const PotentialSpec& spec, double E);

/// Weyl-law smoothed level density V(E) / (2 pi K)^f.
double smoothed_density(const PotentialSpec& spec, double K, double E);

enum class SingularityKind { jump, log_divergence, slope_kink, smooth };

/// Class of the non-analyticity that V(E) develops at the energy of the
/// given stationary point.
SingularityKind classify_singularity(const PotentialSpec& spec, const StationaryPoint& sp);

VolumeCurve volume_curve(const PotentialSpec& spec, std::span<const double> energies);

std::string to_string(SingularityKind kind);

}  // namespace esqpt
