#pragma once

#include "sqz/quadrature.hpp"
#include "sqz/rng.hpp"

namespace sqz::testing {

// The source characterized in the reference measurements; used as the
// canonical parameter point across the test suites.
inline SqueezerParams reference_params() {
  SqueezerParams p;
  p.efficiency = 0.965;
  p.threshold_power = 0.221;
  p.phase_jitter = 0.66 * 3.14159265358979323846 / 180.0;
  p.cavity = {0.10, 0.001, 0.0798};
  return p;
}

// Random valid parameter/operating points for property tests.
struct RandomPoint {
  SqueezerParams params;
  OperatingPoint op;
};

inline RandomPoint random_point(CounterRng& rng, double eta_min = 0.0,
                                double eta_max = 1.0) {
  RandomPoint r;
  r.params.efficiency = eta_min + (eta_max - eta_min) * rng.uniform();
  r.params.threshold_power = 0.05 + 0.5 * rng.uniform();
  r.params.phase_jitter = 1.5 * rng.uniform();
  r.params.cavity = {0.01 + 0.2 * rng.uniform(), 0.005 * rng.uniform(),
                     0.02 + 0.2 * rng.uniform()};
  r.op.pump_power = 0.95 * r.params.threshold_power * rng.uniform();
  r.op.sideband_frequency = 1e5 + 5e7 * rng.uniform();
  return r;
}

}  // namespace sqz::testing
