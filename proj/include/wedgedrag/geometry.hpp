#pragma once

#include <optional>

#include "wedgedrag/vec2.hpp"

namespace wedgedrag {

/// Symmetric wedge: two arms of length L leaving the vertex at angles +theta and -theta
/// to the direction of motion, hollow side forward.
///
/// theta must lie in [pi/4, pi/2); below pi/4 a particle can bounce more than once
/// inside the hollow at constant velocity, which the recollision model does not cover.
class WedgeConfig {
public:
    /// Throws ConfigError when theta or length is out of range.
    WedgeConfig(double theta, double length = 1.0);

    double theta() const noexcept { return theta_; }
    double length() const noexcept { return length_; }

    /// Point of the upper arm at arc parameter eta, body frame (vertex at origin).
    Vec2 upper_point(double eta) const;
    /// Point of the lower arm at arc parameter eta, body frame.
    Vec2 lower_point(double eta) const;

private:
    double theta_;
    double length_;
};

/// Unit vectors attached to the wedge.
struct FrameVectors {
    Vec2 n_hat;       ///< normal of the upper arm, pointing into the hollow: (sin t, -cos t)
    Vec2 p_hat;       ///< normal of the lower arm, pointing into the hollow: (sin t, cos t)
    Vec2 p_perp_hat;  ///< (-cos t, sin t)
    double phi = 0.0; ///< rotation angle pi/2 - theta taking p_hat onto the first w-axis
};

FrameVectors frame_vectors(const WedgeConfig& cfg);

/// Unit vector orthogonal to the chord from R(eta) on the upper arm to the far end Q of the
/// lower arm, oriented so that psi_hat . n_hat > 0. Throws std::domain_error outside [0, L].
Vec2 psi_hat(const WedgeConfig& cfg, double eta);

/// Elastic reflection off a wall of unit normal N moving with velocity V_body along x,
/// in the infinite-mass limit: w_N = 2 V_N - v_N, tangential part unchanged.
Vec2 reflect(const Vec2& v, double body_velocity, const Vec2& normal);

/// |v0|^2 = v^2 - 4 V_p (v - V x).p_hat for a particle that bounced once off the lower arm.
double precollision_speed_sq(const Vec2& v, double body_velocity, const WedgeConfig& cfg);

/// Slopes of the deficit region in rotated velocity coordinates:
/// a w1 < w2 < b w1, 0 <= w1 <= threshold.
struct RegionBounds {
    double a = 0.0;
    /// Empty at the vertex (eta = 0), where the upper slope is unbounded.
    std::optional<double> b;
    double threshold = 0.0;

    bool unbounded() const noexcept { return !b.has_value(); }
};

RegionBounds region_bounds(const WedgeConfig& cfg, double eta, double t);

/// Analytic membership test for the recollision region R(eta, t):
/// v'.n < 0, v'.psi > 0 and v'.p >= eta sin(2 theta) / t, with v' = v - V x.
bool in_recollision_region(const WedgeConfig& cfg, double eta, double t, const Vec2& v,
                           double body_velocity);

struct TraceResult {
    bool recollided = false;
    Vec2 v0;
    /// Arc parameter on the lower arm where the earlier bounce happened.
    std::optional<double> recollision_point_eta;
};

/// Follows a particle that strikes the upper arm at eta with lab velocity v at time t
/// backwards along its straight body-frame path. Reports the lab velocity it had at time 0.
///
/// Uses only segment intersection, never the region inequalities. Throws ContractViolation
/// if the velocity is not incoming on the front face, and std::logic_error if a second
/// earlier bounce is found.
TraceResult backward_trace(const WedgeConfig& cfg, double eta, const Vec2& v,
                           double body_velocity, double t);

/// sin(2 theta) / t, the small parameter of the long-time expansion.
/// t = 0 maps to +infinity.
double inverse_time(const WedgeConfig& cfg, double t);
/// Inverse of inverse_time.
double time_from_inverse(const WedgeConfig& cfg, double inverse);

}  // namespace wedgedrag
