#pragma once

namespace sqz {

// Speed of light, truncated to the 4-digit value used throughout the
// cavity figures (keeps derived quantities consistent with quoted numbers).
inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace sqz
