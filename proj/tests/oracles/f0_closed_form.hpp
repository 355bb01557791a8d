#pragma once

// Closed-form drag on the upper arm without recollisions.
//
// Only the normal velocity component u = v.n matters. Integrating the Maxwellian over the
// tangential component leaves a 1D Gaussian in u, and each half-space integral
// of (u - c)^2 exp(-beta u^2) reduces to erfc and exp terms.

#include <cmath>
#include <numbers>

namespace oracle {

// Integral over u > c of (u - c)^2 exp(-beta u^2) du.
inline double upper_moment(double c, double beta) {
    const double rb = std::sqrt(beta);
    return (0.5 / beta + c * c) * 0.5 * std::sqrt(std::numbers::pi / beta) * std::erfc(rb * c) -
           c * std::exp(-beta * c * c) / (2.0 * beta);
}

// Integral over u < c of the same integrand, by u -> -u.
inline double lower_moment(double c, double beta) { return upper_moment(-c, beta); }

inline double f0(double velocity, double theta, double length, double rho, double beta) {
    const double c = velocity * std::sin(theta);
    const double front = lower_moment(c, beta);  // particles hitting the hollow side
    const double back = upper_moment(c, beta);
    return 4.0 * rho * length * std::sin(theta) * std::sqrt(beta / std::numbers::pi) * (front - back);
}

}  // namespace oracle
