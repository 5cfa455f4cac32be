#pragma once

#include <cmath>
#include <numbers>

namespace pdclab {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Polarizer angles are defined modulo pi; maps into [0, pi).
inline double wrap_half_turn(double rad) {
  double r = std::fmod(rad, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

} // namespace pdclab
