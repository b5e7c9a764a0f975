#include "sqz/quadrature.hpp"

#include <cmath>

#include "sqz/constants.hpp"

namespace sqz {

void CavityConstants::validate() const {
  if (!(coupler_transmissivity > 0.0 && coupler_transmissivity < 1.0))
    throw DomainError("coupler transmissivity T must lie in (0, 1)");
  if (!(round_trip_loss >= 0.0 && round_trip_loss < 1.0))
    throw DomainError("round-trip loss L must lie in [0, 1)");
  if (!(round_trip_length > 0.0))
    throw DomainError("round-trip length l must be positive");
  if (!(coupler_transmissivity + round_trip_loss < 1.0))
    throw DomainError("T + L must be below 1");
}

void SqueezerParams::validate() const {
  cavity.validate();
  if (!(efficiency >= 0.0 && efficiency <= 1.0))
    throw DomainError("efficiency eta must lie in [0, 1]");
  if (!(threshold_power > 0.0))
    throw DomainError("threshold power must be positive");
  if (!(phase_jitter >= 0.0 && phase_jitter < kPi / 2.0))
    throw DomainError("phase jitter must lie in [0, pi/2)");
}

double decay_rate(const CavityConstants& cavity) {
  cavity.validate();
  return kSpeedOfLight *
         (cavity.coupler_transmissivity + cavity.round_trip_loss) /
         cavity.round_trip_length;
}

VariancePair opa_variance_pair(const SqueezerParams& params,
                               const OperatingPoint& op) {
  params.validate();
  if (op.pump_power < 0.0) throw DomainError("pump power must be >= 0");
  if (op.sideband_frequency < 0.0)
    throw DomainError("sideband frequency must be >= 0");
  if (op.pump_power >= params.threshold_power)
    throw AboveThresholdError(op.pump_power, params.threshold_power);

  const double x = std::sqrt(op.pump_power / params.threshold_power);
  const double kappa = decay_rate(params.cavity);
  const double omega = 2.0 * kPi * op.sideband_frequency / kappa;
  const double detuning_sq = 4.0 * omega * omega;
  const double eta = params.efficiency;

  VariancePair out;
  out.v1 = 1.0 - eta * (4.0 * x / ((1.0 + x) * (1.0 + x) + detuning_sq));
  out.v2 = 1.0 + eta * (4.0 * x / ((1.0 - x) * (1.0 - x) + detuning_sq));
  return out;
}

VariancePair apply_phase_jitter(const VariancePair& pair, double theta_fluc) {
  if (!(theta_fluc >= 0.0 && theta_fluc < kPi / 2.0))
    throw DomainError("phase jitter must lie in [0, pi/2)");
  const double s = std::sin(theta_fluc);
  const double s2 = s * s;
  const double c2 = 1.0 - s2;
  // v2' derived from the conserved sum so the identity holds exactly.
  const double sum = pair.v1 + pair.v2;
  const double v1_mixed = pair.v1 * c2 + pair.v2 * s2;
  return {v1_mixed, sum - v1_mixed};
}

VariancePair apply_efficiency(const VariancePair& pair, double eta_extra) {
  if (!(eta_extra >= 0.0 && eta_extra <= 1.0))
    throw DomainError("extra efficiency must lie in [0, 1]");
  return {1.0 + eta_extra * (pair.v1 - 1.0), 1.0 + eta_extra * (pair.v2 - 1.0)};
}

double variance_at_angle(const VariancePair& pair, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return pair.v1 * c * c + pair.v2 * s * s;
}

double to_db(double linear_variance) {
  if (!(linear_variance > 0.0))
    throw DomainError("variance must be positive for dB conversion");
  return 10.0 * std::log10(linear_variance);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double normalize_and_correct(double meas, double vacuum, double dark) {
  if (dark < 0.0) throw TraceError("dark level must be >= 0");
  if (!(vacuum > dark))
    throw TraceError("vacuum level must exceed the dark level");
  if (!(meas > dark))
    throw TraceError("measured level must exceed the dark level");
  return (meas - dark) / (vacuum - dark);
}

double visibility_to_efficiency(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw DomainError("visibility must lie in [0, 1]");
  return visibility * visibility;
}

double uncertainty_product(const VariancePair& pair) {
  return pair.v1 * pair.v2;
}

}  // namespace sqz
