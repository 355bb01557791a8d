#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles/f0_closed_form.hpp"
#include "test_support.hpp"
#include "wedgedrag/errors.hpp"
#include "wedgedrag/friction.hpp"
#include "wedgedrag/particle_oracle.hpp"

using namespace wedgedrag;
using testing::kPi;

namespace {

const GasState kGas;

}  // namespace

TEST_CASE("F0 vanishes at rest and is odd") {
    for (double theta : {kPi / 4.0, kPi / 3.0, 1.45}) {
        const WedgeConfig cfg(theta);
        CHECK(std::abs(friction_f0(0.0, cfg, kGas)) <= 1e-12);
        for (double V : {0.25, 0.5, 1.0}) {
            const double plus = friction_f0(V, cfg, kGas);
            CHECK(plus > 0.0);
            CHECK(friction_f0(-V, cfg, kGas) == doctest::Approx(-plus).epsilon(1e-12));
        }
    }
}

TEST_CASE("F0 matches the closed-form normal-velocity reduction") {
    for (double theta : {kPi / 4.0, kPi / 3.0}) {
        for (double V : {0.25, 0.5, 1.0}) {
            const double expected = oracle::f0(V, theta, 1.0, 1.0, 1.0);
            CHECK(friction_f0(V, WedgeConfig(theta), kGas) == doctest::Approx(expected).epsilon(1e-8));
        }
    }
    testing::Gen gen(31);
    for (int i = 0; i < 25; ++i) {
        const double theta = gen.theta();
        const double L = gen.uniform(0.2, 3.0);
        const double rho = gen.uniform(0.1, 5.0);
        const double beta = gen.uniform(0.2, 5.0);
        const double V = gen.uniform(-2.0, 2.0);
        const double got = friction_f0(V, WedgeConfig(theta, L), GasState(rho, beta));
        CHECK(got == doctest::Approx(oracle::f0(V, theta, L, rho, beta)).epsilon(1e-8));
    }
}

TEST_CASE("closed-form oracle reproduces high-precision reference values") {
    // 30-digit evaluations of the same closed form.
    struct Ref { double theta, V, rho, beta, value; };
    const std::vector<Ref> refs = {
        {kPi / 4.0, 0.25, 1.0, 1.0, 0.570048274464640472868},
        {kPi / 4.0, 0.5, 1.0, 1.0, 1.17481758349899479333},
        {kPi / 4.0, 1.0, 1.0, 1.0, 2.61533403796416768300},
        {kPi / 3.0, 0.25, 1.0, 1.0, 0.859445997350444587316},
        {kPi / 3.0, 0.5, 1.0, 1.0, 1.79642259620694122555},
        {kPi / 3.0, 1.0, 1.0, 1.0, 4.17410485838923368076},
        {kPi / 3.0, 0.5, 2.0, 1.5, 3.01606781128459209478},
    };
    for (const auto& r : refs) {
        CHECK(oracle::f0(r.V, r.theta, 1.0, r.rho, r.beta) == doctest::Approx(r.value).epsilon(1e-13));
        CHECK(friction_f0(r.V, WedgeConfig(r.theta), GasState(r.rho, r.beta)) ==
              doctest::Approx(r.value).epsilon(1e-10));
    }
}

TEST_CASE("recollision terms vanish at rest and at t = 0") {
    const WedgeConfig cfg(kPi / 3.0);
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
        CHECK(friction_g(0.0, t, cfg, kGas) == 0.0);
        CHECK(delta_g_direct(0.0, t, cfg, kGas) == 0.0);
        CHECK(delta_g_raw(0.0, t, cfg, kGas) == 0.0);
    }
    CHECK(friction_g_inf(0.0, cfg, kGas) == 0.0);
    CHECK(dg_dT(0.0, 0.3, cfg, kGas) == 0.0);
    CHECK(friction_g(0.5, 0.0, cfg, kGas) == 0.0);
    // only impacts within O(t) of the vertex can have bounced: g shrinks linearly
    double previous = friction_g(0.5, 1e-2, cfg, kGas);
    for (double t : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const double g = friction_g(0.5, t, cfg, kGas);
        CHECK(g < previous);
        CHECK(g <= 1.0 * t);
        previous = g;
    }
    CHECK_THROWS_AS(friction_g(-0.5, 1.0, cfg, kGas), std::domain_error);
    CHECK_THROWS_AS(friction_g(0.5, -1.0, cfg, kGas), std::domain_error);
    CHECK_THROWS_AS(dg_dT(0.5, 0.0, cfg, kGas), std::domain_error);
}

TEST_CASE("g grows with t inside [0, g_inf] and reaches g_inf") {
    for (double theta : {kPi / 4.0, kPi / 3.0, 1.45}) {
        const WedgeConfig cfg(theta);
        for (double V : {0.25, 1.0}) {
            const double g_inf = friction_g_inf(V, cfg, kGas);
            CHECK(g_inf > 0.0);
            double previous = 0.0;
            for (double t : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
                const double g = friction_g(V, t, cfg, kGas);
                CHECK(g >= previous);
                CHECK(g <= g_inf * (1.0 + 1e-9));
                previous = g;
            }
            CHECK(friction_g(V, 1e3, cfg, kGas) == doctest::Approx(g_inf).epsilon(1e-9));
        }
    }
}

TEST_CASE("g_inf fades as the wedge opens toward a flat plate") {
    const double base = friction_g_inf(0.5, WedgeConfig(kPi / 4.0), kGas);
    double previous = base;
    for (double theta : {1.2, 1.4, 1.5, 1.55}) {
        const double value = friction_g_inf(0.5, WedgeConfig(theta), kGas);
        CHECK(value > 0.0);
        CHECK(value < previous);
        previous = value;
    }
    CHECK(previous < 0.01 * base);
}

TEST_CASE("the deficit agrees across three formulations") {
    const WedgeConfig cfg(kPi / 3.0);
    for (double V : {0.25, 1.0, 2.0}) {
        const double g_inf = friction_g_inf(V, cfg, kGas);
        CHECK(delta_g_direct(V, 0.0, cfg, kGas) == doctest::Approx(g_inf).epsilon(1e-10));
        for (double t : {0.5, 2.0, 8.0}) {
            const double direct = delta_g_direct(V, t, cfg, kGas);
            const double raw = delta_g_raw(V, t, cfg, kGas);
            const double difference = g_inf - friction_g(V, t, cfg, kGas);
            CHECK(direct > 0.0);
            CHECK(raw == doctest::Approx(direct).epsilon(1e-6));
            CHECK(difference == doctest::Approx(direct).epsilon(1e-6));
        }
    }
}

TEST_CASE("dDg/dT matches a centered difference of the deficit") {
    const WedgeConfig cfg(kPi / 3.0);
    auto deficit_at = [&](double V, double T) {
        return delta_g_direct(V, time_from_inverse(cfg, T), cfg, kGas);
    };
    for (double T : {0.1, 0.5}) {
        const double V = 0.5;
        const double h = 1e-3 * T;
        const double fd = (deficit_at(V, T + h) - deficit_at(V, T - h)) / (2.0 * h);
        const double exact = dg_dT(V, T, cfg, kGas);
        CHECK(exact > 0.0);
        CHECK(exact == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("dDg/dT vanishes like T^4 at small T") {
    const WedgeConfig cfg(kPi / 3.0);
    const double a = dg_dT(0.5, 0.01, cfg, kGas);
    const double b = dg_dT(0.5, 0.005, cfg, kGas);
    CHECK(a > 0.0);
    CHECK(b > 0.0);
    const double order = std::log2(a / b);
    CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("breakdown invariants") {
    const WedgeConfig cfg(kPi / 3.0);
    const FrictionBreakdown rest = friction_breakdown(0.0, 5.0, cfg, kGas);
    CHECK(std::abs(rest.f0) <= 1e-12);
    CHECK(rest.g == 0.0);
    CHECK(rest.g_inf == 0.0);
    CHECK(rest.delta_g == 0.0);
    CHECK(std::abs(rest.fv_total) <= 1e-12);

    const FrictionBreakdown start = friction_breakdown(0.5, 0.0, cfg, kGas);
    CHECK(start.g == 0.0);
    CHECK(start.delta_g == start.g_inf);

    testing::Gen gen(32);
    for (int i = 0; i < 6; ++i) {
        const double V = gen.uniform(0.05, 2.0);
        const double t = gen.uniform(0.1, 30.0);
        const FrictionBreakdown b = friction_breakdown(V, t, WedgeConfig(gen.theta()), kGas);
        CHECK(std::abs(b.fv_total - (b.f0 + b.g)) <= 1e-12);
        CHECK(b.g >= 0.0);
        CHECK(b.delta_g >= 0.0);
    }
}

TEST_CASE("quadrature spec validation names the field") {
    QuadratureSpec bad;
    bad.velocity_cutoff_sigmas = 2.0;
    try {
        friction_g_inf(0.5, WedgeConfig(1.0), kGas, bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "quadrature.cutoff_sigmas");
    }
    CHECK_THROWS_AS(GasState(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(GasState(1.0, -1.0), ConfigError);
}

TEST_CASE("g agrees with the particle oracle at theta = pi/4, V = 0.5, t = 10") {
    const WedgeConfig cfg(kPi / 4.0);
    const McEstimate mc = estimate_friction_mc(0.5, 10.0, cfg, kGas, McSpec{});
    const double quadrature = friction_f0(0.5, cfg, kGas) + friction_g(0.5, 10.0, cfg, kGas);
    CHECK(std::abs(mc.mean - quadrature) <= 3.0 * mc.std_error);
    CHECK(mc.std_error <= 0.01 * std::abs(mc.mean));
}
