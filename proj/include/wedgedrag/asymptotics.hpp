#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wedgedrag/friction.hpp"

namespace wedgedrag {

/// Power-law fit of the recollision deficit over a log-spaced time window.
struct DecayFit {
    double exponent = 0.0;       ///< slope of log(delta_g) against log(t)
    double log_intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> t_grid;  ///< points actually used (above the noise floor)
    std::vector<double> values;  ///< delta_g at t_grid
    double c_lower = 0.0;        ///< min of delta_g (1+t)^5 over t_grid
    double c_upper = 0.0;        ///< max of delta_g (1+t)^5 over t_grid
    std::size_t requested_points = 0;
};

/// Log-spaced grid of n points on [t_min, t_max], endpoints included.
std::vector<double> log_grid(double t_min, double t_max, std::size_t n);

/// Fits an arbitrary deficit curve. Grid points whose value is at or below noise_floor end
/// the usable window. Throws FitError if fewer than three points survive.
DecayFit fit_decay_exponent(const std::function<double(double)>& deficit, double t_min,
                            double t_max, std::size_t n_points, double noise_floor = 0.0);

/// Fits delta_g_direct(V, t). Requires V > 0, 0 < t_min < t_max, n_points >= 8.
DecayFit fit_decay_exponent(double velocity, const WedgeConfig& cfg, const GasState& gas,
                            double t_min, double t_max, std::size_t n_points,
                            const QuadratureSpec& spec = {});

struct StationarityPoint {
    double velocity = 0.0;
    double inverse_t = 0.0;
    double d_delta_g = 0.0;  ///< d(Delta g)/dT = -dg/dT
    bool strict = true;      ///< false for the V = 0 row, which is checked separately
};

struct StationarityReport {
    std::vector<StationarityPoint> points;
    /// V = 0 cannot be stationary under E > 0: F0(0) and g(0, t) both vanish.
    double f0_at_rest = 0.0;
    double g_at_rest = 0.0;
    bool rest_excluded = false;
    bool passed = false;
};

/// Evaluates d(Delta g)/dT over V_grid x T_grid. Throws ObstructionViolation listing every
/// point with V > 0 where the value is not strictly positive, or V = 0 where it is nonzero.
StationarityReport stationarity_obstruction_scan(const WedgeConfig& cfg, const GasState& gas,
                                                 const std::vector<double>& velocities,
                                                 const std::vector<double>& inverse_times,
                                                 const QuadratureSpec& spec = {});

struct LimitingVelocity {
    double v_bar_inf = 0.0;
    double residual = 0.0;  ///< E - F0 - g_inf at v_bar_inf
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

struct LimitSolverOptions {
    double velocity_cap = 64.0;
    double initial_step = 0.125;
    double velocity_tol = 1e-10;
    /// Required |residual| / E at the returned root.
    double residual_tol = 1e-10;
    /// Points used to confirm that the residual decreases strictly across the bracket.
    std::size_t monotone_checks = 9;
};

/// Residual h(V) = E - F0(V) - g_inf(V) of the long-time force balance.
double limiting_residual(double force, double velocity, const WedgeConfig& cfg,
                         const GasState& gas, const QuadratureSpec& spec = {});

/// First root of h from V = 0 upward: bracket doubling, then bisection.
/// Throws UnboundedVelocityError past the cap and NonMonotoneResidualError if h is not
/// strictly decreasing across the final bracket.
LimitingVelocity solve_limiting_velocity(double force, const WedgeConfig& cfg,
                                         const GasState& gas, const QuadratureSpec& spec = {},
                                         const LimitSolverOptions& opt = {});

}  // namespace wedgedrag
