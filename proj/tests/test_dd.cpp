#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fvdp/driftdiffusion.hpp"

using namespace fvdp;

namespace {

MeshND line_mesh(double a, double b, int n) { return build_cartesian({build_uniform_1d(a, b, n)}); }

// example-3 style diode boundary: electrons injected on the right, holes on
// the left, bias -1 / +1
DDBoundary diode_boundary() {
    DDBoundary bc;
    bc.contact = [](int axis, int side, std::array<double, 3>) -> std::optional<DDContact> {
        if (axis != 0) return std::nullopt;
        return side == 0 ? DDContact{0.0, 1.0, -1.0} : DDContact{1.0, 0.0, 1.0};
    };
    return bc;
}

std::vector<double> step_doping(const MeshND& mesh) {
    std::vector<double> c(mesh.cell_count());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = mesh.cell_center(i)[0] <= 0.5 ? -1.0 : 1.0;
    return c;
}

}  // namespace

TEST_CASE("pressure inverse g and its derivative") {
    // gamma = 2: g(s) = 1 + s/2 above the vacuum threshold s = -2
    CHECK(g_of(2.0, 0.0) == 1.0);
    CHECK_THAT(g_of(2.0, 1.0), Catch::Matchers::WithinAbs(1.5, 1e-14));
    CHECK(g_of(2.0, -2.0) == 0.0);
    CHECK(g_of(2.0, -5.0) == 0.0);
    for (double gamma : {1.5, 2.0, 3.0}) {
        CHECK_THAT(g_of(gamma, 0.0), Catch::Matchers::WithinAbs(1.0, 1e-14));
        // inverse of the enthalpy
        const auto m = dd_continuity(gamma, -1);
        for (double s : {0.3, 1.0, 1.8})
            CHECK_THAT(g_of(gamma, m.h(s)), Catch::Matchers::WithinAbs(s, 1e-12));
        // derivative by central difference
        for (double s : {-0.4, 0.5, 2.0}) {
            const double e = 1e-6;
            const double d = (g_of(gamma, s + e) - g_of(gamma, s - e)) / (2.0 * e);
            CHECK_THAT(g_prime(gamma, s), Catch::Matchers::WithinAbs(d, 1e-6));
        }
    }
    CHECK_THROWS_AS(g_of(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("poisson solve reproduces linear potentials exactly") {
    const MeshND mesh = line_mesh(0.0, 1.0, 50);
    DDBoundary bc;
    bc.contact = [](int, int side, std::array<double, 3>) -> std::optional<DDContact> {
        return DDContact{0.0, 0.0, side == 0 ? -1.0 : 1.0};
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    const auto V = poisson_solve(zero, zero, zero, bmap, mesh);
    for (std::size_t i = 0; i < V.size(); ++i)
        CHECK_THAT(V[i], Catch::Matchers::WithinAbs(-1.0 + 2.0 * mesh.cell_center(i)[0], 1e-12));
}

TEST_CASE("poisson solve with zero data is zero") {
    const MeshND mesh = line_mesh(0.0, 1.0, 20);
    DDBoundary bc;
    bc.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
        return DDContact{0.0, 0.0, 0.0};
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    for (double v : poisson_solve(zero, zero, zero, bmap, mesh))
        CHECK_THAT(v, Catch::Matchers::WithinAbs(0.0, 1e-13));
}

TEST_CASE("poisson solve converges at second order for a uniform source") {
    // Delta V = 1, V(0) = V(1) = 0: V(x) = x(x-1)/2
    double prev = 1e9;
    for (int n : {25, 50, 100}) {
        const MeshND mesh = line_mesh(0.0, 1.0, n);
        DDBoundary bc;
        bc.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
            return DDContact{0.0, 0.0, 0.0};
        };
        const auto bmap = build_dd_boundary(bc, mesh, 2.0);
        std::vector<double> N(mesh.cell_count(), 1.0), zero(mesh.cell_count(), 0.0);
        const auto V = poisson_solve(N, zero, zero, bmap, mesh);
        double err = 0.0;
        for (std::size_t i = 0; i < V.size(); ++i) {
            const double x = mesh.cell_center(i)[0];
            err = std::max(err, std::abs(V[i] - 0.5 * x * (x - 1.0)));
        }
        CHECK(err < prev / 3.0);  // ~4x per halving
        prev = err;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("2D poisson solve (conjugate gradient) reproduces a linear potential") {
    const MeshND mesh =
        build_cartesian({build_uniform_1d(0.0, 1.0, 12), build_uniform_1d(0.0, 1.0, 10)});
    DDBoundary bc;
    bc.contact = [](int, int, std::array<double, 3> x) -> std::optional<DDContact> {
        return DDContact{0.0, 0.0, x[0] + 2.0 * x[1]};
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    const auto V = poisson_solve(zero, zero, zero, bmap, mesh);
    for (std::size_t i = 0; i < V.size(); ++i) {
        const auto x = mesh.cell_center(i);
        CHECK_THAT(V[i], Catch::Matchers::WithinAbs(x[0] + 2.0 * x[1], 1e-9));
    }
}

TEST_CASE("all-insulating poisson problem is rejected") {
    const MeshND mesh = line_mesh(0.0, 1.0, 10);
    DDBoundary bc;
    bc.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
        return std::nullopt;
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    CHECK_THROWS_AS(poisson_solve(zero, zero, zero, bmap, mesh), std::invalid_argument);
    CHECK_THROWS_AS(thermal_equilibrium(zero, bmap, mesh, 2.0), std::invalid_argument);
}

TEST_CASE("boundary map derives the quasi-Fermi constants") {
    const MeshND mesh = line_mesh(0.0, 1.0, 16);
    const auto bmap = build_dd_boundary(diode_boundary(), mesh, 2.0);
    REQUIRE(bmap.n_contacts == 2);
    // h(1) = 0, so alpha_N = -V_right... = 0 - (1) .. with signs:
    // alpha_N = h(N) - V at the right contact = 0 - 1 = -1
    // alpha_P = h(P) + V at the left contact = 0 + (-1) = -1
    REQUIRE(bmap.alpha_N.has_value());
    REQUIRE(bmap.alpha_P.has_value());
    CHECK_THAT(*bmap.alpha_N, Catch::Matchers::WithinAbs(-1.0, 1e-14));
    CHECK_THAT(*bmap.alpha_P, Catch::Matchers::WithinAbs(-1.0, 1e-14));
}

TEST_CASE("boundary map rejects inconsistent contacts") {
    const MeshND mesh = line_mesh(0.0, 1.0, 16);
    DDBoundary bc;
    bc.contact = [](int, int side, std::array<double, 3>) -> std::optional<DDContact> {
        // both contacts pin N but with different h(N) - V
        return side == 0 ? DDContact{1.0, 0.0, -1.0} : DDContact{1.0, 0.0, 1.0};
    };
    CHECK_THROWS_AS(build_dd_boundary(bc, mesh, 2.0), std::invalid_argument);

    DDBoundary neg;
    neg.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
        return DDContact{-1.0, 0.0, 0.0};
    };
    CHECK_THROWS_AS(build_dd_boundary(neg, mesh, 2.0), std::invalid_argument);
}

TEST_CASE("thermal equilibrium of the neutral symmetric device is flat") {
    const MeshND mesh = line_mesh(0.0, 1.0, 32);
    DDBoundary bc;
    bc.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
        return DDContact{1.0, 1.0, 0.0};
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    const auto eq = thermal_equilibrium(zero, bmap, mesh, 2.0);
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        CHECK_THAT(eq.V[i], Catch::Matchers::WithinAbs(0.0, 1e-11));
        CHECK_THAT(eq.N[i], Catch::Matchers::WithinAbs(1.0, 1e-11));
        CHECK_THAT(eq.P[i], Catch::Matchers::WithinAbs(1.0, 1e-11));
    }
}

TEST_CASE("thermal equilibrium of the diode is self-consistent") {
    const MeshND mesh = line_mesh(0.0, 1.0, 64);
    const auto bmap = build_dd_boundary(diode_boundary(), mesh, 2.0);
    const auto doping = step_doping(mesh);
    const auto eq = thermal_equilibrium(doping, bmap, mesh, 2.0);

    // the equilibrium densities and potential solve the *linear* Poisson
    // equation with themselves as sources
    const auto V = poisson_solve(eq.N, eq.P, doping, bmap, mesh);
    for (std::size_t i = 0; i < V.size(); ++i)
        CHECK_THAT(V[i], Catch::Matchers::WithinAbs(eq.V[i], 1e-9));

    // densities follow the statistics of the potential
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        CHECK_THAT(eq.N[i], Catch::Matchers::WithinAbs(g_of(2.0, eq.alpha_N + eq.V[i]), 1e-13));
        CHECK_THAT(eq.P[i], Catch::Matchers::WithinAbs(g_of(2.0, eq.alpha_P - eq.V[i]), 1e-13));
    }
    // junction structure: V increases, N increases, P decreases
    const std::size_t nc = mesh.cell_count();
    CHECK(eq.V[nc - 1] > eq.V[0]);
    CHECK(eq.N[nc - 1] > eq.N[0]);
    CHECK(eq.P[nc - 1] < eq.P[0]);
}

TEST_CASE("thermal equilibrium is a fixed point of the coupled step") {
    const MeshND mesh = line_mesh(0.0, 1.0, 64);
    const auto bmap = build_dd_boundary(diode_boundary(), mesh, 2.0);
    const auto doping = step_doping(mesh);
    const auto eq = thermal_equilibrium(doping, bmap, mesh, 2.0);

    DDState st{eq.N, eq.P, eq.V, 0.0};
    for (const auto& scheme : {FluxScheme::fu1(), FluxScheme::fu2()}) {
        DDState next = dd_step(st, 2.0, bmap, mesh, doping, scheme, 5e-5);
        for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
            CHECK_THAT(next.N[i], Catch::Matchers::WithinAbs(eq.N[i], 1e-10));
            CHECK_THAT(next.P[i], Catch::Matchers::WithinAbs(eq.P[i], 1e-10));
        }
    }
    CHECK(dd_relative_energy(st, eq, 2.0, mesh, bmap) < 1e-13);
}

TEST_CASE("electron-hole symmetry of the neutral device") {
    const MeshND mesh = line_mesh(0.0, 1.0, 40);
    DDBoundary bc;
    bc.contact = [](int, int, std::array<double, 3>) -> std::optional<DDContact> {
        return DDContact{1.0, 1.0, 0.0};
    };
    const auto bmap = build_dd_boundary(bc, mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);

    DDState st;
    st.N.resize(mesh.cell_count());
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> pick(0.5, 1.5);
    for (auto& v : st.N) v = pick(rng);
    st.P = st.N;  // identical species in a neutral device stay identical
    for (int k = 0; k < 20; ++k) st = dd_step(st, 2.0, bmap, mesh, zero, FluxScheme::fu2(), 5e-5);
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        CHECK_THAT(st.N[i], Catch::Matchers::WithinAbs(st.P[i], 1e-13));
        CHECK_THAT(st.V[i], Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("diode relaxation dissipates the relative energy") {
    const MeshND mesh = line_mesh(0.0, 1.0, 64);
    const auto bmap = build_dd_boundary(diode_boundary(), mesh, 2.0);
    const auto doping = step_doping(mesh);
    const auto eq = thermal_equilibrium(doping, bmap, mesh, 2.0);

    DDState init;
    init.N.resize(mesh.cell_count());
    init.P.resize(mesh.cell_count());
    for (std::size_t i = 0; i < mesh.cell_count(); ++i) {
        const double x = mesh.cell_center(i)[0];
        init.N[i] = x > 0.5 ? 1.0 : 0.0;
        init.P[i] = x <= 0.5 ? 1.0 : 0.0;
    }
    const auto res = dd_run(std::move(init), 2.0, bmap, mesh, doping, FluxScheme::fu2(), 2e-5,
                            0.02, 100, &eq);
    REQUIRE(res.records.size() >= 5);
    for (std::size_t i = 1; i < res.records.size(); ++i) {
        CHECK(res.records[i].energy <= res.records[i - 1].energy + 1e-12);
        CHECK(res.records[i].dissipation >= 0.0);
    }
    CHECK(res.records.back().l1_to_equilibrium < res.records.front().l1_to_equilibrium);
}

TEST_CASE("coupled step validates input") {
    const MeshND mesh = line_mesh(0.0, 1.0, 16);
    const auto bmap = build_dd_boundary(diode_boundary(), mesh, 2.0);
    const std::vector<double> zero(mesh.cell_count(), 0.0);
    DDState st{zero, zero, zero, 0.0};
    CHECK_THROWS_AS(dd_step(st, 2.0, bmap, mesh, zero, FluxScheme::fu2(), 0.0),
                    std::invalid_argument);
}
