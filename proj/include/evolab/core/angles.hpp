#pragma once

// Planar heading extraction and per-step angle unwrapping.
//
// Orientations are intrinsic z-y-x Euler angles. The body x-axis under
// R_zyx(phi) projects onto the plane as (cos(phi_z)cos(phi_y),
// sin(phi_z)cos(phi_y)); the signed step between two orientations is the
// angle from the previous projection to the current one, computed as
// atan2(det, dot) so each step lands in (-pi, pi] regardless of winding.

#include <cmath>

namespace evolab::core {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Wrap into (-pi, pi].
inline double wrap_pi(double a) {
    a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

struct EulerAngles {
    double phi_x = 0.0;  // roll
    double phi_y = 0.0;  // pitch
    double phi_z = 0.0;  // yaw
};

struct UnwrapResult {
    double delta = 0.0;      // signed step, (-pi, pi]
    bool degenerate = false; // planar projection vanished (pitch ~ +-pi/2)
};

// Signed planar rotation step from `prev` to `now`. Degenerate projections
// (norm below 1e-9) contribute 0 and set the flag instead of NaN-ing sums.
inline UnwrapResult unwrap_z(const EulerAngles& now, const EulerAngles& prev) {
    const double ax = std::cos(prev.phi_z) * std::cos(prev.phi_y);
    const double ay = std::sin(prev.phi_z) * std::cos(prev.phi_y);
    const double bx = std::cos(now.phi_z) * std::cos(now.phi_y);
    const double by = std::sin(now.phi_z) * std::cos(now.phi_y);

    const double na = std::sqrt(ax * ax + ay * ay);
    const double nb = std::sqrt(bx * bx + by * by);
    if (na < 1e-9 || nb < 1e-9) return {0.0, true};

    const double dot = ax * bx + ay * by;
    const double det = ax * by - ay * bx;
    double delta = std::atan2(det, dot);
    if (delta <= -kPi) delta += 2.0 * kPi;  // pin range to (-pi, pi]
    return {delta, false};
}

// Heading-only overload for planar bodies.
inline UnwrapResult unwrap_z(double heading_now, double heading_prev) {
    return unwrap_z(EulerAngles{0.0, 0.0, heading_now},
                    EulerAngles{0.0, 0.0, heading_prev});
}

}  // namespace evolab::core
