#pragma once

#include "wedgedrag/geometry.hpp"

namespace wedgedrag {

/// Maxwellian background gas, f0(v) = rho (beta/pi) exp(-beta v^2).
class GasState {
public:
    /// Throws ConfigError unless rho > 0 and beta > 0.
    GasState(double rho = 1.0, double beta = 1.0);

    double rho() const noexcept { return rho_; }
    double beta() const noexcept { return beta_; }
    /// Phase-space prefactor rho beta / pi.
    double k() const noexcept;

private:
    double rho_;
    double beta_;
};

struct QuadratureSpec {
    double rel_tol = 1e-11;
    double abs_tol = 1e-30;
    /// Velocity integrals are truncated at |v'| <= V + cutoff / sqrt(beta).
    double velocity_cutoff_sigmas = 6.0;
    /// Number of geometric panels in eta; the smallest touches the vertex.
    int eta_panels = 4;

    /// Throws ConfigError on non-positive tolerances, cutoff < 4 or eta_panels < 1.
    void validate() const;
};

struct FrictionBreakdown {
    double f0 = 0.0;
    double g = 0.0;
    double g_inf = 0.0;
    double delta_g = 0.0;
    double fv_total = 0.0;
};

/// Recollision-free drag on the wedge held at velocity V. Odd in V, positive for V > 0.
double friction_f0(double velocity, const WedgeConfig& cfg, const GasState& gas,
                   const QuadratureSpec& spec = {});

/// Recollision correction at time t, integrated over the exact recollision region in
/// relative-velocity polar coordinates. g(V, 0) = 0. Requires V >= 0.
double friction_g(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                  const QuadratureSpec& spec = {});

/// Long-time limit of friction_g (the time threshold dropped).
double friction_g_inf(double velocity, const WedgeConfig& cfg, const GasState& gas,
                      const QuadratureSpec& spec = {});

/// g_inf - g computed directly over the deficit triangle in rotated w-coordinates,
/// w2 inner and w1 outer. Delta g(V, 0) = g_inf(V).
double delta_g_direct(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                      const QuadratureSpec& spec = {});

/// The same deficit integrated in unrotated relative-velocity polar coordinates.
double delta_g_raw(double velocity, double t, const WedgeConfig& cfg, const GasState& gas,
                   const QuadratureSpec& spec = {});

/// d(Delta g)/dT at inverse time T = sin(2 theta)/t, i.e. -dg/dT. Requires T > 0.
double dg_dT(double velocity, double inverse_t, const WedgeConfig& cfg, const GasState& gas,
             const QuadratureSpec& spec = {});

/// All four functionals at (V, t) with their mutual invariants checked.
FrictionBreakdown friction_breakdown(double velocity, double t, const WedgeConfig& cfg,
                                     const GasState& gas, const QuadratureSpec& spec = {});

}  // namespace wedgedrag
