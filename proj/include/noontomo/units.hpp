#pragma once

#include <numbers>

namespace noontomo {

// Angles are radians inside the library; degrees only at the CLI and file
// boundaries.
constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

}  // namespace noontomo
