#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fvdp/flux.hpp"
#include "fvdp/model.hpp"

using namespace fvdp;

namespace {

ProblemModel pure_drift(double dv) {
    auto zero = [](double) { return 0.0; };
    return linear_drift_custom_diffusion(zero, zero, zero, zero, dv, "pure_drift");
}

}  // namespace

TEST_CASE("van Leer limiter bounds") {
    CHECK(van_leer(-1.0) == 0.0);
    CHECK(van_leer(0.0) == 0.0);
    CHECK(van_leer(1.0) == 1.0);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> pick(0.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double theta = pick(rng);
        const double phi = van_leer(theta);
        CHECK(phi >= 0.0);
        CHECK(phi < 2.0);
        CHECK(phi <= 2.0 * theta + 1e-15);
    }
}

TEST_CASE("reconstructed traces stay between neighboring cell averages") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> pick(0.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const InterfaceStencil s{pick(rng), pick(rng), pick(rng), pick(rng), 0.0, 0.1};
        const auto [um, up] = reconstruct(s);
        const double lo = std::min(s.u_m, s.u_p), hi = std::max(s.u_m, s.u_p);
        CHECK(um >= lo - 1e-13);
        CHECK(um <= hi + 1e-13);
        CHECK(up >= lo - 1e-13);
        CHECK(up <= hi + 1e-13);
    }
}

TEST_CASE("FU1 is the upwind flux for pure linear drift") {
    for (double dv : {1.5, -0.7}) {
        const auto m = pure_drift(dv);
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> pick(0.0, 2.0);
        for (int i = 0; i < 200; ++i) {
            const double um = pick(rng), up = pick(rng);
            const InterfaceStencil s{um, um, up, up, dv, 0.05};
            const double a = -dv;
            const double expected = a > 0.0 ? a * um : a * up;
            CHECK_THAT(flux_fu1(m, s), Catch::Matchers::WithinAbs(expected, 1e-14));
        }
    }
}

TEST_CASE("FU1 matches an independent local Lax-Friedrichs evaluation") {
    const auto m = fokker_planck(1);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> pick(0.05, 3.0);
    std::uniform_real_distribution<double> dvp(-2.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const InterfaceStencil s{pick(rng), pick(rng), pick(rng), pick(rng), dvp(rng), 0.04};
        // oracle: velocity and LLF form written out from scratch
        const double a =
            -s.dv - (std::log(s.u_p / (1.0 + s.u_p)) - std::log(s.u_m / (1.0 + s.u_m))) / s.dist;
        const double alpha =
            std::max(std::abs(1.0 + 2.0 * s.u_m), std::abs(1.0 + 2.0 * s.u_p));
        const double fm = s.u_m * (1.0 + s.u_m), fp = s.u_p * (1.0 + s.u_p);
        const double oracle = 0.5 * a * (fm + fp) - 0.5 * std::abs(a) * alpha * (s.u_p - s.u_m);
        CHECK_THAT(flux_fu1(m, s),
                   Catch::Matchers::WithinAbs(oracle, 1e-11 * (1.0 + std::abs(oracle))));
    }
}

TEST_CASE("FU2 with the limiter disabled degenerates to FU1 bitwise") {
    const auto m = porous_media(3.0);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> pick(0.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        const InterfaceStencil s{pick(rng), pick(rng), pick(rng), pick(rng), 0.5, 0.02};
        CHECK(flux_fu2(m, s, Limiter::none) == flux_fu1(m, s));
    }
}

TEST_CASE("all schemes annihilate a discrete equilibrium interface") {
    const auto m = linear_drift_power_diffusion(2.0, 1.0);
    // h(u_p) - h(u_m) = -dv * dist makes the velocity vanish; with
    // h(s) = 2(s - 1) pick u_p = u_m - dv * dist / 2
    const double dist = 0.1, dv = 1.0;
    for (double um : {0.8, 1.0, 1.6}) {
        const double up = um - dv * dist / 2.0;
        const InterfaceStencil s{um, um, up, up, dv, dist};
        CHECK_THAT(flux_fu1(m, s), Catch::Matchers::WithinAbs(0.0, 1e-14));
        CHECK_THAT(flux_fu2(m, s), Catch::Matchers::WithinAbs(0.0, 1e-14));
        CHECK_THAT(velocity(m, s), Catch::Matchers::WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("classical upwind flux hand value and linearity guard") {
    const auto m = linear_drift_power_diffusion(2.0, 1.0);
    // w = -dv = -1 < 0: convection takes u_p; diffusion two-point
    const InterfaceStencil s{1.0, 1.0, 2.0, 2.0, 1.0, 0.5};
    const double expected = -1.0 * 2.0 - (4.0 - 1.0) / 0.5;
    CHECK_THAT(flux_cu(m, s), Catch::Matchers::WithinAbs(expected, 1e-14));
    CHECK_THROWS_AS(flux_cu(fokker_planck(1), s), std::invalid_argument);
    CHECK_THROWS_AS(flux_sgext(fokker_planck(1), s), std::invalid_argument);
}

TEST_CASE("Bernoulli function identities") {
    CHECK(bernoulli(0.0) == 1.0);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> pick(-30.0, 30.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = pick(rng);
        CHECK_THAT(bernoulli(-x), Catch::Matchers::WithinAbs(bernoulli(x) + x, 1e-12));
    }
    // smooth across the Taylor guard
    CHECK_THAT(bernoulli(1.0000001e-8), Catch::Matchers::WithinRel(bernoulli(0.9999999e-8), 1e-9));
}

TEST_CASE("dr_mean is exactly 1 for linear diffusion") {
    const auto m = dd_continuity(1.0, -1);
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> pick(0.01, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double a = pick(rng), b = pick(rng);
        CHECK(dr_mean(m, a, b) == 1.0);
    }
    CHECK(dr_mean(m, 0.7, 0.7) == 1.0);
}

TEST_CASE("SGext matches an independent Scharfetter-Gummel evaluation for linear diffusion") {
    const auto m = dd_continuity(1.0, -1);
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> pick(0.05, 3.0);
    std::uniform_real_distribution<double> dvp(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double um = pick(rng), up = pick(rng), dv = dvp(rng), dist = 0.05;
        const InterfaceStencil s{um, um, up, up, dv, dist};
        // textbook form: F = (B(x) u_m - B(-x) u_p) / dist, x = dist * dv
        const double x = dist * dv;
        auto B = [](double y) { return std::abs(y) < 1e-12 ? 1.0 : y / (std::exp(y) - 1.0); };
        const double oracle = (B(x) * um - B(-x) * up) / dist;
        CHECK_THAT(flux_sgext(m, s),
                   Catch::Matchers::WithinAbs(oracle, 1e-10 * (1.0 + std::abs(oracle))));
    }
}

TEST_CASE("SGext on a fully degenerate interface reduces to upwind convection") {
    const auto m = linear_drift_piecewise_cubic(1.0);
    // both states below 1: r' = 0 throughout
    const InterfaceStencil s{0.4, 0.4, 0.7, 0.7, 1.0, 0.1};
    const double w = -1.0;  // w < 0 takes the right state
    CHECK_THAT(flux_sgext(m, s), Catch::Matchers::WithinAbs(w * 0.7, 1e-14));
}

TEST_CASE("velocity stays finite at singular enthalpy endpoints") {
    const auto bl = buckley_leverett(0.1);
    const InterfaceStencil s{0.5, 0.5, 0.0, 0.0, -1.0, 0.01};
    CHECK(std::isfinite(velocity(bl, s)));
    CHECK(std::isfinite(flux_fu2(bl, s)));
    const auto fermi = fokker_planck(-1);
    const InterfaceStencil s2{1.0, 1.0, 0.0, 0.0, 1.0, 0.01};
    CHECK(std::isfinite(velocity(fermi, s2)));
}

TEST_CASE("scheme selector validates limiter pairing") {
    CHECK_THROWS_AS((FluxScheme{FluxKind::fu1, Limiter::van_leer}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((FluxScheme{FluxKind::fu2, Limiter::none}.validate()), std::invalid_argument);
    CHECK_NOTHROW(FluxScheme::fu2().validate());
    CHECK(std::string(flux_name(FluxKind::sgext)) == "sgext");
}

TEST_CASE("flux consistency under refinement") {
    // smooth profile u(x) = 0.8 + 0.3 sin x, V' = 1: the interface flux must
    // approach f(u) * (-V' - htilde'(u) u') = -u (1 + h'(u) u') at x = 0
    const auto m = porous_media(2.0);
    auto u = [](double x) { return 0.8 + 0.3 * std::sin(x); };
    const double u0 = u(0.0), du = 0.3;  // u'(0)
    const double exact = -u0 * 0.0 - u0 * (2.0 / u0) * du * u0;  // f u' h'... see below
    // physical flux: -(f(u) dV + r'(u) u') with dV read from the potential
    // gradient 0 here; use dv = 1 instead:
    const double physical = -(u0 * 1.0 + 2.0 * u0 * du);
    (void)exact;
    double prev_err = 1e9;
    for (double dx : {0.1, 0.05, 0.025, 0.0125}) {
        const InterfaceStencil s{u(-1.5 * dx), u(-0.5 * dx), u(0.5 * dx), u(1.5 * dx), 1.0, dx};
        const double err = std::abs(flux_fu2(m, s) - physical);
        CHECK(err < prev_err + 1e-12);
        prev_err = err;
    }
    CHECK(prev_err < 5e-3);
}
