#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Parameter or argument outside its physical domain.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Pump power at or above the OPA threshold; the below-threshold model
// does not apply there.
class AboveThresholdError : public DomainError {
 public:
  AboveThresholdError(double pump_w, double threshold_w)
      : DomainError("pump power " + std::to_string(pump_w) +
                    " W is at or above threshold " +
                    std::to_string(threshold_w) + " W"),
        pump_w(pump_w),
        threshold_w(threshold_w) {}
  double pump_w;
  double threshold_w;
};

// Geometrically unstable resonator; carries the stability parameter
// m = (A + D + 2) / 4, which must lie in (0, 1) for a stable cavity.
class InstabilityError : public DomainError {
 public:
  explicit InstabilityError(double stability)
      : DomainError("unstable cavity, stability parameter " +
                    std::to_string(stability) + " outside (0, 1)"),
        stability(stability) {}
  double stability;
};

// Malformed cavity element sequence.
class LayoutError : public DomainError {
 public:
  explicit LayoutError(const std::string& what) : DomainError(what) {}
};

// Measurement trace that cannot be normalized (e.g. signal below dark noise).
class TraceError : public DomainError {
 public:
  explicit TraceError(const std::string& what) : DomainError(what) {}
};

}  // namespace sqz
