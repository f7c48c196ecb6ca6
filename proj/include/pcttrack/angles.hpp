#pragma once

#include <numbers>

namespace pcttrack {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps theta into (-pi, pi]. Idempotent and 2*pi periodic.
double wrap_angle(double theta);

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace pcttrack
