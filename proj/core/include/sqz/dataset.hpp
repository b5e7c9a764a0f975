#pragma once

#include <string>
#include <vector>

#include "sqz/quadrature.hpp"

namespace sqz {

enum class QuadratureTag { squeezed, antisqueezed };

// One normalized variance observation from a pump sweep.
struct MeasurementPoint {
  double pump_power = 0.0;  // W
  double sigma_pump = 0.0;  // W, absolute
  double frequency = 0.0;   // Hz
  QuadratureTag tag = QuadratureTag::squeezed;
  double value_db = 0.0;    // dB relative to vacuum
  double sigma_db = 0.0;    // dB

  void validate() const;
};

struct Dataset {
  std::vector<MeasurementPoint> points;
  CavityConstants cavity;
  std::vector<std::string> metadata;  // free-form provenance lines

  void validate() const;
};

}  // namespace sqz
