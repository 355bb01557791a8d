#include "wedgedrag/particle_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wedgedrag/errors.hpp"
#include "wedgedrag/rng.hpp"

namespace wedgedrag {

namespace {

struct StratumMoments {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

// Runs body(shard) for shard in [0, count) on up to `threads` workers.
template <class Body>
void for_each_shard(std::size_t count, std::size_t threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t s = 0; s < count; ++s) body(s);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t s = w; s < count; s += threads) body(s);
        });
    }
}

}  // namespace

McEstimate estimate_friction_mc(double velocity, double t, const WedgeConfig& cfg,
                                const GasState& gas, const McSpec& mc) {
    if (!(velocity >= 0.0) || !std::isfinite(velocity)) {
        throw std::domain_error("estimate_friction_mc requires V >= 0");
    }
    if (!(t >= 0.0)) throw std::domain_error("estimate_friction_mc requires t >= 0");
    const std::size_t strata = mc.stratify_eta;
    if (strata == 0) throw EstimationError("stratify_eta must be at least 1", 0);

    std::vector<std::size_t> quota(strata, mc.n_samples / strata);
    for (std::size_t j = 0; j < mc.n_samples % strata; ++j) ++quota[j];
    for (std::size_t j = 0; j < strata; ++j) {
        if (quota[j] < 2) {
            throw EstimationError("eta stratum " + std::to_string(j) + " receives " +
                                      std::to_string(quota[j]) + " samples (need >= 2)",
                                  j);
        }
    }

    const FrameVectors frame = frame_vectors(cfg);
    const double L = cfg.length();
    const double beta = gas.beta();
    const double sigma = std::sqrt(0.5 / beta);

    std::vector<StratumMoments> moments(strata);
    for_each_shard(strata, mc.threads, [&](std::size_t j) {
        CounterRng rng(mc.seed, j);
        StratumMoments acc;
        const double width = L / static_cast<double>(strata);
        for (std::size_t i = 0; i < quota[j]; ++i) {
            const double eta = width * (static_cast<double>(j) + rng.uniform());
            const auto [gx, gy] = rng.normal_pair();
            const Vec2 v{sigma * gx, sigma * gy};
            const Vec2 rel{v.x - velocity, v.y};
            const double un = dot(rel, frame.n_hat);
            double h = 0.0;
            if (un < 0.0) {
                double weight = 1.0;
                if (t > 0.0) {
                    const TraceResult tr = backward_trace(cfg, eta, v, velocity, t);
                    if (tr.recollided) weight = std::exp(-beta * (norm_sq(tr.v0) - norm_sq(v)));
                }
                h = un * un * weight;
            } else {
                h = -un * un;
            }
            acc.push(h);
        }
        moments[j] = acc;
    });

    // Maxwellian normalisation cancels: F = 4 rho sin(theta) * integral over eta of E[h].
    const double scale = 4.0 * gas.rho() * std::sin(cfg.theta());
    const double width = L / static_cast<double>(strata);
    double mean = 0.0;
    double var = 0.0;
    for (const auto& m : moments) {
        mean += width * m.mean;
        var += width * width * m.variance() / static_cast<double>(m.n);
    }
    return {scale * mean, scale * std::sqrt(var), mc.n_samples};
}

AuditReport region_agreement_audit(const WedgeConfig& cfg, double velocity, double t,
                                   std::size_t n_samples, std::uint64_t seed) {
    if (!(velocity >= 0.0)) throw std::domain_error("audit requires V >= 0");
    if (!(t > 0.0)) throw std::domain_error("audit requires t > 0");
    const FrameVectors frame = frame_vectors(cfg);
    const double L = cfg.length();
    const double sin2 = std::sin(2.0 * cfg.theta());
    // Wide enough that the threshold line v'.p = eta sin(2 theta)/t is well populated.
    const double spread = 1.0 + sin2 * L / t;

    CounterRng rng(seed, 0);
    AuditReport report;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double eta = L * rng.uniform_open_low();
        const auto [gx, gy] = rng.normal_pair();
        Vec2 rel{spread * gx, spread * gy};
        const double un = dot(rel, frame.n_hat);
        if (un > 0.0) rel = rel - (2.0 * un) * frame.n_hat;
        const Vec2 v{rel.x + velocity, rel.y};
        ++report.sampled;

        const double scale = std::max(1.0, norm(rel));
        const double band = kAuditBand * scale;
        const double threshold = eta * sin2 / t;
        if (std::abs(dot(rel, frame.n_hat)) < band ||
            std::abs(dot(rel, psi_hat(cfg, eta))) < band ||
            std::abs(dot(rel, frame.p_hat) - threshold) < band * std::max(1.0, threshold)) {
            ++report.excluded;
            continue;
        }
        const bool analytic = in_recollision_region(cfg, eta, t, v, velocity);
        const bool traced = backward_trace(cfg, eta, v, velocity, t).recollided;
        if (analytic != traced) ++report.disagreements;
    }
    const std::size_t checked = report.sampled - report.excluded;
    report.ratio = checked > 0 ? static_cast<double>(report.disagreements) / checked : 0.0;
    return report;
}

}  // namespace wedgedrag
