#include "wedgedrag/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "wedgedrag/errors.hpp"

namespace wedgedrag {

std::vector<double> log_grid(double t_min, double t_max, std::size_t n) {
    if (!(t_min > 0.0) || !(t_max > t_min)) {
        throw std::domain_error("log_grid requires 0 < t_min < t_max");
    }
    if (n < 2) throw std::domain_error("log_grid requires at least two points");
    std::vector<double> grid(n);
    const double lo = std::log(t_min);
    const double step = (std::log(t_max) - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::exp(lo + step * static_cast<double>(i));
    grid.front() = t_min;
    grid.back() = t_max;
    return grid;
}

DecayFit fit_decay_exponent(const std::function<double(double)>& deficit, double t_min,
                            double t_max, std::size_t n_points, double noise_floor) {
    DecayFit fit;
    fit.requested_points = n_points;
    for (double t : log_grid(t_min, t_max, n_points)) {
        const double value = deficit(t);
        if (!(value > noise_floor)) break;
        fit.t_grid.push_back(t);
        fit.values.push_back(value);
    }
    const std::size_t n = fit.t_grid.size();
    if (n < 3) {
        throw FitError("only " + std::to_string(n) +
                       " decay points above the noise floor; raise t_min or lower t_max");
    }

    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += std::log(fit.t_grid[i]);
        sy += std::log(fit.values[i]);
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(fit.t_grid[i]) - mx;
        const double dy = std::log(fit.values[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.exponent = sxy / sxx;
    fit.log_intercept = my - fit.exponent * mx;
    fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;

    fit.c_lower = std::numeric_limits<double>::infinity();
    fit.c_upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scaled = fit.values[i] * std::pow(1.0 + fit.t_grid[i], 5);
        fit.c_lower = std::min(fit.c_lower, scaled);
        fit.c_upper = std::max(fit.c_upper, scaled);
    }
    return fit;
}

DecayFit fit_decay_exponent(double velocity, const WedgeConfig& cfg, const GasState& gas,
                            double t_min, double t_max, std::size_t n_points,
                            const QuadratureSpec& spec) {
    if (!(velocity > 0.0)) {
        throw std::domain_error("decay fit needs V > 0; the deficit vanishes identically at rest");
    }
    if (!(t_min > 0.0) || !(t_max > t_min)) {
        throw std::domain_error("decay fit needs 0 < t_min < t_max");
    }
    if (n_points < 8) throw std::domain_error("decay fit needs at least 8 grid points");
    auto deficit = [&](double t) { return delta_g_direct(velocity, t, cfg, gas, spec); };
    return fit_decay_exponent(deficit, t_min, t_max, n_points, 1e3 * spec.abs_tol);
}

StationarityReport stationarity_obstruction_scan(const WedgeConfig& cfg, const GasState& gas,
                                                 const std::vector<double>& velocities,
                                                 const std::vector<double>& inverse_times,
                                                 const QuadratureSpec& spec) {
    StationarityReport report;
    std::string offending;
    double longest_t = 0.0;
    for (double T : inverse_times) {
        if (!(T > 0.0)) throw std::domain_error("inverse-time grid values must be positive");
        longest_t = std::max(longest_t, time_from_inverse(cfg, T));
    }
    for (double V : velocities) {
        if (!(V >= 0.0)) throw std::domain_error("velocity grid values must be non-negative");
        for (double T : inverse_times) {
            StationarityPoint p{V, T, dg_dT(V, T, cfg, gas, spec), V > 0.0};
            const bool bad = p.strict ? !(p.d_delta_g > 0.0) : p.d_delta_g != 0.0;
            if (bad) {
                char buf[128];
                std::snprintf(buf, sizeof buf, " (V=%.17g, T=%.17g, dDg/dT=%.17g)", V, T,
                              p.d_delta_g);
                offending += buf;
            }
            report.points.push_back(p);
        }
    }
    if (!offending.empty()) {
        throw ObstructionViolation("d(Delta g)/dT not strictly positive at:" + offending);
    }

    report.f0_at_rest = friction_f0(0.0, cfg, gas, spec);
    report.g_at_rest = friction_g(0.0, longest_t, cfg, gas, spec);
    // With E > 0, E - F0(0) - g(0, t) = E != 0, so rest is never a stationary state.
    report.rest_excluded = std::abs(report.f0_at_rest) <= 1e-12 && report.g_at_rest == 0.0;
    report.passed = report.rest_excluded;
    return report;
}

double limiting_residual(double force, double velocity, const WedgeConfig& cfg,
                         const GasState& gas, const QuadratureSpec& spec) {
    return force - friction_f0(velocity, cfg, gas, spec) -
           friction_g_inf(velocity, cfg, gas, spec);
}

LimitingVelocity solve_limiting_velocity(double force, const WedgeConfig& cfg,
                                         const GasState& gas, const QuadratureSpec& spec,
                                         const LimitSolverOptions& opt) {
    if (!(force > 0.0) || !std::isfinite(force)) {
        throw std::domain_error("limiting velocity needs a finite force E > 0");
    }
    auto h = [&](double V) { return limiting_residual(force, V, cfg, gas, spec); };

    double lo = 0.0;
    double hi = opt.initial_step;
    double h_hi = h(hi);
    while (h_hi > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > opt.velocity_cap) {
            throw UnboundedVelocityError("no sign change of E - F0 - g_inf below V = " +
                                         std::to_string(opt.velocity_cap));
        }
        h_hi = h(hi);
    }

    LimitingVelocity out;
    out.bracket_lo = lo;
    out.bracket_hi = hi;

    // The root is unique in the bracket only if h decreases strictly across it.
    double previous = h(lo);
    for (std::size_t i = 1; i < opt.monotone_checks; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (opt.monotone_checks - 1);
        const double hx = i + 1 == opt.monotone_checks ? h_hi : h(x);
        if (!(hx < previous)) {
            throw NonMonotoneResidualError("E - F0 - g_inf not strictly decreasing on [" +
                                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        previous = hx;
    }

    const double target = opt.residual_tol * force;
    double a = lo;
    double b = hi;
    double best = h_hi == 0.0 ? hi : 0.5 * (a + b);
    double h_best = h_hi == 0.0 ? 0.0 : h(best);
    while (h_best != 0.0) {
        if (h_best > 0.0) a = best; else b = best;
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (b - a <= opt.velocity_tol && std::abs(h_best) <= target) break;
        best = mid;
        h_best = h(best);
    }
    if (std::abs(h_best) > target) {
        throw ConvergenceError("limiting velocity residual " + std::to_string(h_best) +
                                   " exceeds " + std::to_string(target),
                               best, h_best);
    }
    out.v_bar_inf = best;
    out.residual = h_best;
    return out;
}

}  // namespace wedgedrag
