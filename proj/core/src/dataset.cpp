#include "sqz/dataset.hpp"

#include <set>

namespace sqz {

void MeasurementPoint::validate() const {
  if (!(pump_power >= 0.0)) throw DomainError("pump power must be >= 0");
  if (!(sigma_pump >= 0.0)) throw DomainError("sigma_pump must be >= 0");
  if (!(frequency > 0.0)) throw DomainError("frequency must be positive");
  if (!(sigma_db > 0.0)) throw DomainError("sigma_db must be positive");
}

void Dataset::validate() const {
  cavity.validate();
  if (points.size() < 4)
    throw DomainError("dataset needs at least 4 points");
  std::set<double> powers;
  for (const auto& p : points) {
    p.validate();
    powers.insert(p.pump_power);
  }
  if (powers.size() < 2)
    throw DomainError("dataset must span at least 2 distinct pump powers");
}

}  // namespace sqz
