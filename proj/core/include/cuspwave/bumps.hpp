#pragma once

// Closed-form C-infinity cutoffs glued from x -> exp(-1/x).
// Every spectral or spatial localization in the library goes through these.

#include <cmath>

namespace cuspwave::bumps {

inline double glue(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 0 for x <= 0, 1 for x >= 1, smooth and monotone in between.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = glue(x);
  const double b = glue(1.0 - x);
  return a / (a + b);
}

// Equal to 1 on [b, c], supported in [a, d].
inline double plateau(double x, double a, double b, double c, double d) {
  if (x <= a || x >= d) return 0.0;
  return smooth_step((x - a) / (b - a)) * smooth_step((d - x) / (d - c));
}

// Spectral cutoff: support [0.5, 2], equal to 1 on [0.75, 1.5].
inline constexpr double kSpecLo = 0.5;
inline constexpr double kSpecPlateauLo = 0.75;
inline constexpr double kSpecPlateauHi = 1.5;
inline constexpr double kSpecHi = 2.0;

inline double phi_spec(double lambda) {
  return plateau(lambda, kSpecLo, kSpecPlateauLo, kSpecPlateauHi, kSpecHi);
}

// Coherent-state cutoff: 1 on [-1, 1], supported in [-2, 2].
inline double chi(double x) { return smooth_step(2.0 - std::fabs(x)); }

// Kernel cutoff for properly supported quantization: 1 on [-w/2, w/2], 0 outside [-w, w].
inline double kappa(double x, double width) {
  return smooth_step(2.0 * (width - std::fabs(x)) / width);
}

// Littlewood-Paley profile: 1 for lambda <= 1, 0 for lambda >= 2.
inline double lp_low(double lambda) { return smooth_step(2.0 - lambda); }

// Dyadic piece phi(lambda) = lp_low(lambda) - lp_low(2 lambda), supported in [1/2, 2].
inline double lp_band(double lambda) { return lp_low(lambda) - lp_low(2.0 * lambda); }

}  // namespace cuspwave::bumps
