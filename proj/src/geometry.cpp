#include "wedgedrag/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wedgedrag/errors.hpp"

namespace wedgedrag {

namespace {

void require_on_arm(const WedgeConfig& cfg, double eta) {
    if (!(eta >= 0.0 && eta <= cfg.length())) {
        throw std::domain_error("arc parameter eta=" + std::to_string(eta) +
                                " outside [0, L]");
    }
}

struct LineHit {
    double s;   // parameter along the ray
    double mu;  // arc parameter along the segment
};

// Intersection of origin + s * dir with mu * along; nullopt when parallel.
std::optional<LineHit> intersect(const Vec2& origin, const Vec2& dir, const Vec2& along) {
    const double det = cross(dir, -along);
    if (det == 0.0) return std::nullopt;
    const Vec2 rhs = -origin;
    return LineHit{cross(rhs, -along) / det, cross(dir, rhs) / det};
}

}  // namespace

WedgeConfig::WedgeConfig(double theta, double length) : theta_(theta), length_(length) {
    constexpr double quarter = std::numbers::pi / 4.0;
    constexpr double half = std::numbers::pi / 2.0;
    if (!std::isfinite(theta) || theta < quarter || theta >= half) {
        throw ConfigError("wedge.theta",
                          "must lie in [pi/4, pi/2) radians, got " + std::to_string(theta));
    }
    if (!std::isfinite(length) || length <= 0.0) {
        throw ConfigError("wedge.length", "must be positive, got " + std::to_string(length));
    }
}

Vec2 WedgeConfig::upper_point(double eta) const {
    return {eta * std::cos(theta_), eta * std::sin(theta_)};
}

Vec2 WedgeConfig::lower_point(double eta) const {
    return {eta * std::cos(theta_), -eta * std::sin(theta_)};
}

FrameVectors frame_vectors(const WedgeConfig& cfg) {
    const double s = std::sin(cfg.theta());
    const double c = std::cos(cfg.theta());
    return {{s, -c}, {s, c}, {-c, s}, std::numbers::pi / 2.0 - cfg.theta()};
}

Vec2 psi_hat(const WedgeConfig& cfg, double eta) {
    require_on_arm(cfg, eta);
    const double L = cfg.length();
    const Vec2 raw{(eta + L) * std::sin(cfg.theta()), (L - eta) * std::cos(cfg.theta())};
    return (1.0 / norm(raw)) * raw;
}

Vec2 reflect(const Vec2& v, double body_velocity, const Vec2& normal) {
    const double wall_normal_speed = body_velocity * normal.x;
    const double vn = dot(v, normal);
    return v + (2.0 * (wall_normal_speed - vn)) * normal;
}

double precollision_speed_sq(const Vec2& v, double body_velocity, const WedgeConfig& cfg) {
    const Vec2 p = frame_vectors(cfg).p_hat;
    const double vp_wall = body_velocity * p.x;
    const Vec2 relative{v.x - body_velocity, v.y};
    return norm_sq(v) - 4.0 * vp_wall * dot(relative, p);
}

RegionBounds region_bounds(const WedgeConfig& cfg, double eta, double t) {
    require_on_arm(cfg, eta);
    if (!(t > 0.0)) throw std::domain_error("region_bounds requires t > 0");
    const double two_theta = 2.0 * cfg.theta();
    RegionBounds out;
    out.a = std::tan(two_theta - std::numbers::pi / 2.0);
    if (eta > 0.0) {
        out.b = (cfg.length() - eta * std::cos(two_theta)) / (eta * std::sin(two_theta));
    }
    out.threshold = eta * std::sin(two_theta) / t;
    return out;
}

bool in_recollision_region(const WedgeConfig& cfg, double eta, double t, const Vec2& v,
                           double body_velocity) {
    if (!(t > 0.0)) return false;
    const FrameVectors f = frame_vectors(cfg);
    const Vec2 rel{v.x - body_velocity, v.y};
    const double threshold = eta * std::sin(2.0 * cfg.theta()) / t;
    return dot(rel, f.n_hat) < 0.0 && dot(rel, psi_hat(cfg, eta)) > 0.0 &&
           dot(rel, f.p_hat) >= threshold;
}

TraceResult backward_trace(const WedgeConfig& cfg, double eta, const Vec2& v,
                           double body_velocity, double t) {
    require_on_arm(cfg, eta);
    if (t < 0.0) throw ContractViolation("backward_trace requires t >= 0");
    const FrameVectors f = frame_vectors(cfg);
    const Vec2 rel{v.x - body_velocity, v.y};
    if (!(dot(rel, f.n_hat) < 0.0)) {
        throw ContractViolation("backward_trace requires an incoming velocity (v'.n < 0)");
    }

    TraceResult out{false, v, std::nullopt};
    if (t == 0.0) return out;

    const double L = cfg.length();
    const Vec2 start = cfg.upper_point(eta);
    const Vec2 lower_dir = cfg.lower_point(1.0);
    const auto hit = intersect(start, -rel, lower_dir);
    if (!hit || !(hit->s > 0.0) || hit->s > t || hit->mu < 0.0 || hit->mu > L) return out;

    out.recollided = true;
    out.v0 = reflect(v, body_velocity, f.p_hat);
    out.recollision_point_eta = hit->mu;

    // Keep going backwards from the lower arm: a further bounce on the upper arm would
    // mean more than one recollision, which the model excludes for theta >= pi/4.
    const Vec2 bounce = hit->mu * lower_dir;
    const Vec2 rel0{out.v0.x - body_velocity, out.v0.y};
    const Vec2 upper_dir = cfg.upper_point(1.0);
    const auto second = intersect(bounce, -rel0, upper_dir);
    constexpr double slack = 64.0 * std::numeric_limits<double>::epsilon();
    if (second && second->s > slack * (1.0 + t) && second->s <= t - hit->s &&
        second->mu > slack * L && second->mu <= L) {
        throw std::logic_error("backward_trace found a second earlier bounce (theta=" +
                               std::to_string(cfg.theta()) + ")");
    }
    return out;
}

double inverse_time(const WedgeConfig& cfg, double t) {
    if (t < 0.0) throw std::domain_error("time must be non-negative");
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    return std::sin(2.0 * cfg.theta()) / t;
}

double time_from_inverse(const WedgeConfig& cfg, double inverse) {
    if (!(inverse > 0.0)) throw std::domain_error("inverse time must be positive");
    if (std::isinf(inverse)) return 0.0;
    return std::sin(2.0 * cfg.theta()) / inverse;
}

}  // namespace wedgedrag
