#include "wedgedrag/friction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wedgedrag/errors.hpp"
#include "wedgedrag/quadrature.hpp"

namespace wedgedrag {

GasState::GasState(double rho, double beta) : rho_(rho), beta_(beta) {
    if (!std::isfinite(rho) || rho <= 0.0) {
        throw ConfigError("gas.rho", "must be positive, got " + std::to_string(rho));
    }
    if (!std::isfinite(beta) || beta <= 0.0) {
        throw ConfigError("gas.beta", "must be positive, got " + std::to_string(beta));
    }
}

double GasState::k() const noexcept { return rho_ * beta_ / std::numbers::pi; }

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0)) throw ConfigError("quadrature.rel_tol", "must be positive");
    if (!(abs_tol > 0.0)) throw ConfigError("quadrature.abs_tol", "must be positive");
    if (!(velocity_cutoff_sigmas >= 4.0)) {
        throw ConfigError("quadrature.cutoff_sigmas", "must be at least 4");
    }
    if (eta_panels < 1) throw ConfigError("quadrature.eta_panels", "must be at least 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_forward(double velocity) {
    if (!(velocity >= 0.0) || !std::isfinite(velocity)) {
        throw std::domain_error("recollision terms require a finite velocity V >= 0, got " +
                                std::to_string(velocity));
    }
}

void require_time(double t) {
    if (!(t >= 0.0)) throw std::domain_error("time must be non-negative");
}

// Per-level tolerances for nested integration: inner levels are tighter so their
// noise stays below what the outer level is asked to resolve.
struct Levels {
    quad::Options outer;
    quad::Options middle;
    quad::Options inner;
};

Levels levels(const QuadratureSpec& spec) {
    spec.validate();
    Levels l;
    l.outer = {spec.rel_tol, spec.abs_tol, 400};
    l.middle = {spec.rel_tol * 0.2, spec.abs_tol, 400};
    l.inner = {spec.rel_tol * 0.05, spec.abs_tol, 400};
    return l;
}

// Geometric panel grid on [0, L], finest next to the vertex where b(eta) blows up.
template <class F>
double integrate_eta(F&& f, double length, const QuadratureSpec& spec, const quad::Options& opt) {
    std::vector<double> edges{0.0};
    for (int i = spec.eta_panels - 1; i >= 0; --i) edges.push_back(length * std::ldexp(1.0, -i));
    std::vector<double> parts;
    parts.reserve(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        parts.push_back(quad::integrate(f, edges[i], edges[i + 1], opt).value);
    }
    return quad::pairwise_sum(parts);
}

// Integrand pieces shared by every recollision functional.
struct Recollision {
    Recollision(double velocity, const WedgeConfig& c, const GasState& gas,
                const QuadratureSpec& spec)
        : cfg(c),
          frame(frame_vectors(c)),
          beta(gas.beta()),
          V(velocity),
          wall_speed(velocity * std::sin(c.theta())),
          r_max(velocity + spec.velocity_cutoff_sigmas / std::sqrt(gas.beta())),
          prefactor(4.0 * gas.k() * std::sin(c.theta())),
          a(std::tan(2.0 * c.theta() - std::numbers::pi / 2.0)),
          lv(levels(spec)),
          spec(spec) {}

    // (v'.n)^2 exp(-beta v^2) [exp(4 beta V_p v'.p) - 1] at relative velocity v'.
    double raw(const Vec2& rel) const {
        const double un = dot(rel, frame.n_hat);
        const Vec2 lab{rel.x + V, rel.y};
        return un * un * std::exp(-beta * norm_sq(lab)) *
               std::expm1(4.0 * beta * wall_speed * dot(rel, frame.p_hat));
    }

    // Same integrand in rotated coordinates w = R(-phi) v'.
    double rotated(double w1, double w2) const {
        const double two_theta = 2.0 * cfg.theta();
        const double wn = -std::cos(two_theta) * w1 - std::sin(two_theta) * w2;
        const double s1 = w1 + V * std::sin(cfg.theta());
        const double s2 = w2 - V * std::cos(cfg.theta());
        return wn * wn * std::exp(-beta * (s1 * s1 + s2 * s2)) *
               std::expm1(4.0 * beta * wall_speed * w1);
    }

    double b(double eta) const {
        const double two_theta = 2.0 * cfg.theta();
        return (cfg.length() - eta * std::cos(two_theta)) / (eta * std::sin(two_theta));
    }

    double radial(double angle, double r_lo, double r_hi) const {
        if (!(r_hi > r_lo)) return 0.0;
        const Vec2 e{std::cos(angle), std::sin(angle)};
        auto f = [&](double r) { return r * raw(r * e); };
        return quad::integrate(f, r_lo, r_hi, lv.inner).value;
    }

    enum class Part { Beyond, Within, Full };

    // Integral over the directions from the lower arm to R(eta), split radially at the
    // arrival threshold r_min(angle) = tau / (e . p_hat).
    double cone(double eta, double tau, Part part) const {
        const double theta = cfg.theta();
        const double L = cfg.length();
        const double lo = theta;
        const double hi = std::atan2((eta + L) * std::sin(theta), (eta - L) * std::cos(theta));
        if (!(hi > lo)) return 0.0;

        auto r_min = [&](double angle) { return tau / std::sin(angle + theta); };
        // Beyond this angle r_min exceeds the truncation radius.
        double cut = hi;
        if (part != Part::Full) {
            cut = tau >= r_max ? lo
                               : std::clamp(std::numbers::pi - std::asin(tau / r_max) - theta, lo, hi);
        }
        auto integrate_angle = [&](auto&& g, double x0, double x1) {
            return x1 > x0 ? quad::integrate(g, x0, x1, lv.middle).value : 0.0;
        };
        switch (part) {
            case Part::Full:
                return integrate_angle([&](double ang) { return radial(ang, 0.0, r_max); }, lo, hi);
            case Part::Beyond:
                return integrate_angle([&](double ang) { return radial(ang, r_min(ang), r_max); },
                                       lo, cut);
            case Part::Within: {
                const double near = integrate_angle(
                    [&](double ang) { return radial(ang, 0.0, r_min(ang)); }, lo, cut);
                const double far = integrate_angle(
                    [&](double ang) { return radial(ang, 0.0, r_max); }, cut, hi);
                return near + far;
            }
        }
        return 0.0;
    }

    double polar(double t, Part part) const {
        const double two_theta_sin = std::sin(2.0 * cfg.theta());
        auto per_eta = [&](double eta) {
            const double tau = t == 0.0 ? kInf : eta * two_theta_sin / t;
            return cone(eta, tau, part);
        };
        // Beyond the truncation radius only impacts with eta < t r_max / sin(2 theta) count.
        const double reach = part == Part::Beyond && std::isfinite(t)
                                 ? std::min(cfg.length(), t * r_max / two_theta_sin)
                                 : cfg.length();
        return prefactor * integrate_eta(per_eta, reach, spec, lv.outer);
    }

    // Integral over w2 in [a w1, min(b w1, sqrt(r_max^2 - w1^2))] at fixed (eta, w1).
    double slice(double eta, double w1) const {
        const double top = std::min(b(eta) * w1, std::sqrt(std::max(0.0, r_max * r_max - w1 * w1)));
        const double bottom = a * w1;
        if (!(top > bottom)) return 0.0;
        return quad::integrate([&](double w2) { return rotated(w1, w2); }, bottom, top, lv.inner)
            .value;
    }

    const WedgeConfig& cfg;
    FrameVectors frame;
    double beta;
    double V;
    double wall_speed;
    double r_max;
    double prefactor;
    double a;
    Levels lv;
    const QuadratureSpec& spec;
};

}  // namespace

double friction_f0(double velocity, const WedgeConfig& cfg, const GasState& gas,
                   const QuadratureSpec& spec) {
    if (!std::isfinite(velocity)) throw std::domain_error("velocity must be finite");
    const Levels lv = levels(spec);
    const double beta = gas.beta();
    const double shift = velocity * std::sin(cfg.theta());
    const double span = spec.velocity_cutoff_sigmas / std::sqrt(beta);
    const double u_lo = std::min(-span, shift);
    const double u_hi = std::max(span, shift);

    // v = u n_hat + s n_perp; the flux weight depends on u only, the Maxwellian on both.
    auto half_space = [&](double from, double to) {
        auto outer = [&](double s) {
            auto inner = [&](double u) {
                const double un = u - shift;
                return un * un * std::exp(-beta * (u * u + s * s));
            };
            return to > from ? quad::integrate(inner, from, to, lv.middle).value : 0.0;
        };
        return quad::integrate(outer, -span, span, lv.outer).value;
    };
    const double front = half_space(u_lo, shift);
    const double back = half_space(shift, u_hi);
    return 4.0 * gas.k() * std::sin(cfg.theta()) * cfg.length() * (front - back);
}

double friction_g(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                  const QuadratureSpec& spec) {
    require_forward(velocity);
    require_time(t);
    if (velocity == 0.0 || t == 0.0) return 0.0;
    return Recollision(velocity, cfg, gas, spec).polar(t, Recollision::Part::Beyond);
}

double friction_g_inf(double velocity, const WedgeConfig& cfg, const GasState& gas,
                      const QuadratureSpec& spec) {
    require_forward(velocity);
    if (velocity == 0.0) return 0.0;
    return Recollision(velocity, cfg, gas, spec).polar(kInf, Recollision::Part::Full);
}

double delta_g_raw(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                   const QuadratureSpec& spec) {
    require_forward(velocity);
    require_time(t);
    if (velocity == 0.0) return 0.0;
    return Recollision(velocity, cfg, gas, spec).polar(t, Recollision::Part::Within);
}

double delta_g_direct(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                      const QuadratureSpec& spec) {
    require_forward(velocity);
    require_time(t);
    if (velocity == 0.0) return 0.0;
    const Recollision k(velocity, cfg, gas, spec);
    const double inverse = inverse_time(cfg, t);
    const double w1_wedge_end = k.r_max / std::hypot(1.0, k.a);

    auto per_eta = [&](double eta) {
        const double w1_end = std::min(inverse * eta, w1_wedge_end);
        // Past this w1 the disk, not the psi-line, bounds w2 from above.
        const double knee = std::min(k.r_max / std::hypot(1.0, k.b(eta)), w1_end);
        auto over_w1 = [&](double w1) { return k.slice(eta, w1); };
        double sum = 0.0;
        if (knee > 0.0) sum += quad::integrate(over_w1, 0.0, knee, k.lv.middle).value;
        if (w1_end > knee) sum += quad::integrate(over_w1, knee, w1_end, k.lv.middle).value;
        return sum;
    };
    return k.prefactor * integrate_eta(per_eta, cfg.length(), spec, k.lv.outer);
}

double dg_dT(double velocity, double inverse_t, const WedgeConfig& cfg, const GasState& gas,
             const QuadratureSpec& spec) {
    require_forward(velocity);
    if (!(inverse_t > 0.0) || !std::isfinite(inverse_t)) {
        throw std::domain_error("dg_dT requires a finite inverse time T > 0");
    }
    if (velocity == 0.0) return 0.0;
    const Recollision k(velocity, cfg, gas, spec);
    auto per_eta = [&](double eta) { return eta * k.slice(eta, inverse_t * eta); };
    return k.prefactor * integrate_eta(per_eta, cfg.length(), spec, k.lv.outer);
}

FrictionBreakdown friction_breakdown(double velocity, double t, const WedgeConfig& cfg,
                                     const GasState& gas, const QuadratureSpec& spec) {
    require_forward(velocity);
    require_time(t);
    FrictionBreakdown out;
    out.f0 = friction_f0(velocity, cfg, gas, spec);
    out.g_inf = friction_g_inf(velocity, cfg, gas, spec);
    if (t == 0.0) {
        out.g = 0.0;
        out.delta_g = out.g_inf;
    } else {
        out.g = friction_g(velocity, t, cfg, gas, spec);
        out.delta_g = delta_g_direct(velocity, t, cfg, gas, spec);
    }
    out.fv_total = out.f0 + out.g;

    const double slack = std::max(1e3 * spec.rel_tol * out.g_inf, spec.abs_tol);
    if (out.g < 0.0 || out.g > out.g_inf + slack) {
        throw ConvergenceError("breakdown violates 0 <= g <= g_inf", out.g, out.g - out.g_inf);
    }
    const double mismatch = out.delta_g - (out.g_inf - out.g);
    if (std::abs(mismatch) > slack) {
        throw ConvergenceError("breakdown violates delta_g = g_inf - g", out.delta_g, mismatch);
    }
    return out;
}

}  // namespace wedgedrag
