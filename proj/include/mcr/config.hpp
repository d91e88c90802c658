#pragma once

#include <algorithm>
#include <cmath>

namespace mcr {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Tolerance bundle passed explicitly to every solver. No global state.
///
/// eps_len is an absolute length tolerance, normally derived from the
/// instance diameter (1e-9 * diameter). eps_ang is an absolute angular
/// tolerance in radians. tol_omega is the agreement tolerance between the
/// omega-curve evaluation and the direct geometric recomputation.
struct Config {
    double eps_len = 1e-9;
    double eps_ang = 1e-10;
    double tol_omega = 1e-7;
    double eps_disc = 1e-12;   // dimensionless discriminant clamp band
    bool parallel = false;

    static Config for_diameter(double diameter) {
        Config c;
        c.eps_len = 1e-9 * std::max(diameter, 1.0);
        return c;
    }
};

/// Wrap an angle to [0, 2*pi).
inline double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

/// Signed angular difference wrapped to (-pi, pi].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return d;
}

/// True when two angles coincide modulo 2*pi within eps.
inline bool angles_equal(double a, double b, double eps) {
    return std::abs(angle_diff(a, b)) <= eps;
}

}  // namespace mcr
