#pragma once

#include <cstddef>
#include <cstdint>

#include "wedgedrag/friction.hpp"
#include "wedgedrag/geometry.hpp"

namespace wedgedrag {

struct McSpec {
    std::size_t n_samples = 1'000'000;
    std::uint64_t seed = 20261016;
    /// Number of equal-width eta strata; each stratum is one reproducible shard.
    std::size_t stratify_eta = 64;
    /// Worker threads; 0 picks hardware concurrency. Results do not depend on it.
    std::size_t threads = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_effective = 0;
};

/// Monte Carlo estimate of the total friction F^V(t) = F0(V) + g(V, t).
///
/// Impact points are stratified in eta, velocities drawn from the equilibrium Maxwellian.
/// Each front-face sample is traced backwards with backward_trace; a traced bounce
/// reweights the sample by exp(-beta (v0^2 - v^2)). The analytic region test is never
/// consulted. Throws EstimationError if a stratum receives fewer than two samples.
McEstimate estimate_friction_mc(double velocity, double t, const WedgeConfig& cfg,
                                const GasState& gas, const McSpec& mc);

struct AuditReport {
    std::size_t sampled = 0;
    /// Samples within the boundary band of some region inequality.
    std::size_t excluded = 0;
    std::size_t disagreements = 0;
    /// disagreements / (sampled - excluded)
    double ratio = 0.0;
};

/// Boundary band half-width for the audit.
inline constexpr double kAuditBand = 1e-9;

/// Compares in_recollision_region against backward_trace on random incoming impacts.
AuditReport region_agreement_audit(const WedgeConfig& cfg, double velocity, double t,
                                   std::size_t n_samples, std::uint64_t seed);

}  // namespace wedgedrag
