#pragma once

#include <cmath>
#include <numbers>

namespace itpn {

inline constexpr double pi = std::numbers::pi;

/// Wrap an angle to (-pi, pi].
inline double wrap_pi(double x) {
    double y = std::remainder(x, 2.0 * pi);
    if (y <= -pi) y += 2.0 * pi;
    return y;
}

inline double deg_to_rad(double d) { return d * pi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / pi; }

}  // namespace itpn
