#pragma once

#include <numbers>

namespace kkscatter::constants {

// CODATA 2018
inline constexpr double kEpsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace kkscatter::constants
