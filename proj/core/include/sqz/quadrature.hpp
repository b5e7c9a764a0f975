#pragma once

#include "sqz/errors.hpp"

namespace sqz {

// Fixed resonator constants of the squeezing cavity.
struct CavityConstants {
  double coupler_transmissivity = 0.0;  // T, power fraction
  double round_trip_loss = 0.0;         // L, power fraction
  double round_trip_length = 0.0;       // l, optical path in meters

  void validate() const;
};

// Full parameter set of the squeezed-light source model: the three
// fitted quantities plus the fixed cavity constants.
struct SqueezerParams {
  double efficiency = 1.0;       // eta, lumped detection efficiency
  double threshold_power = 0.0;  // P_thr, watts
  double phase_jitter = 0.0;     // theta_fluc, rms radians
  CavityConstants cavity;

  void validate() const;
};

// Quadrature variance pair normalized to vacuum = 1.
struct VariancePair {
  double v1 = 1.0;  // squeezed quadrature
  double v2 = 1.0;  // anti-squeezed quadrature
};

// One evaluation point of the model.
struct OperatingPoint {
  double pump_power = 0.0;         // watts
  double sideband_frequency = 0.0; // hertz
};

// Cavity field decay rate kappa = c (T + L) / l in 1/s.
double decay_rate(const CavityConstants& cavity);

// Below-threshold OPA quadrature variances at a pump power and sideband
// frequency, including the lumped efficiency but not phase jitter.
// Requires pump_power < threshold_power.
VariancePair opa_variance_pair(const SqueezerParams& params,
                               const OperatingPoint& op);

// Mixes the pair as if the homodyne phase were offset by the rms jitter
// angle: v1' = v1 cos^2 + v2 sin^2 and vice versa. Preserves v1 + v2.
VariancePair apply_phase_jitter(const VariancePair& pair, double theta_fluc);

// Extra loss channel pulling both variances toward vacuum:
// v' = 1 + eta (v - 1).
VariancePair apply_efficiency(const VariancePair& pair, double eta_extra);

// Variance of the rotated quadrature X(theta) = X1 cos + X2 sin for
// uncorrelated principal quadratures.
double variance_at_angle(const VariancePair& pair, double theta);

// dB relative to vacuum (10 log10) and back.
double to_db(double linear_variance);
double from_db(double db);

// Dark-noise correction and vacuum normalization in linear power units:
// (meas - dark) / (vacuum - dark).
double normalize_and_correct(double meas, double vacuum, double dark);

// Mode mismatch enters as the square of the homodyne fringe visibility.
double visibility_to_efficiency(double visibility);

// v1 * v2; equals 1 for a pure squeezed state, > 1 when mixed.
double uncertainty_product(const VariancePair& pair);

}  // namespace sqz
