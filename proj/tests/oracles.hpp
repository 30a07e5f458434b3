#pragma once

// Closed-form oracles used to freeze expected values in the tests. These are
// independent of the library code paths they check: everything here is direct
// arithmetic on exact formulas for circles, spheres and Gaussians.

#include <cmath>
#include <numbers>

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// Maximized Gaussian-weighted length of any shrinking circle at its matched
// scale: sqrt(2 pi / e) = 1.5203469010662807...
inline double circle_peak_density() { return std::sqrt(2.0 * kPi / std::numbers::e); }

// Gaussian-weighted length of a circle of radius R about its center:
// 2 pi R exp(-R^2 / 4 tau) / sqrt(4 pi tau).
inline double circle_weighted_length(double radius, double tau) {
    return 2.0 * kPi * radius * std::exp(-radius * radius / (4.0 * tau)) /
           std::sqrt(4.0 * kPi * tau);
}

// Shrinker defect of a circle about its center: the integrand is the constant
// |1/R - R/(2 tau)|^2.
inline double circle_shrinker_residual(double radius, double tau) {
    const double defect = 1.0 / radius - radius / (2.0 * tau);
    return defect * defect * circle_weighted_length(radius, tau);
}

// Exact shrinking-circle solution: radius sqrt(R0^2 - 2t), vanishing time
// R0^2 / 2.
inline double circle_radius_at(double r0, double t) { return std::sqrt(r0 * r0 - 2.0 * t); }
inline double circle_vanishing_time(double r0) { return 0.5 * r0 * r0; }

// Heat kernel of R^d evaluated directly.
inline double heat_kernel_direct(double dist2, double tau, int d) {
    return std::exp(-dist2 / (4.0 * tau)) / std::pow(4.0 * kPi * tau, 0.5 * d);
}

}  // namespace oracles
