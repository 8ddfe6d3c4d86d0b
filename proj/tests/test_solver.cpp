#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "fvdp/equilibrium.hpp"
#include "fvdp/solver.hpp"

using namespace fvdp;

namespace {

MeshND line_mesh(double a, double b, int n) { return build_cartesian({build_uniform_1d(a, b, n)}); }

BoundaryCondition neumann_bc(int dim) {
    return BoundaryCondition::uniform(dim, {BcSide::neumann(), BcSide::neumann()});
}

BoundaryCondition periodic_bc(int dim) {
    return BoundaryCondition::uniform(dim, {BcSide::periodic(), BcSide::periodic()});
}

State random_state(const MeshND& mesh, unsigned seed, double lo = 0.0, double hi = 2.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pick(lo, hi);
    State st;
    st.values.resize(mesh.cell_count());
    for (auto& v : st.values) v = pick(rng);
    return st;
}

}  // namespace

TEST_CASE("initial projection is exact for cubic data") {
    const MeshND mesh = line_mesh(0.0, 1.0, 4);
    const State st = project_initial([](std::span<const double> x) { return x[0] * x[0] * x[0]; },
                                     mesh);
    for (int i = 0; i < 4; ++i) {
        const double a = 0.25 * i, b = 0.25 * (i + 1);
        const double avg = (b * b * b * b - a * a * a * a) / (4.0 * (b - a));
        CHECK_THAT(st.values[i], Catch::Matchers::WithinAbs(avg, 1e-15));
    }
    // 2D: constants project to constants
    const MeshND m2 = build_cartesian({build_uniform_1d(0.0, 1.0, 3), build_uniform_1d(0.0, 2.0, 3)});
    for (double v : project_initial([](std::span<const double>) { return 0.7; }, m2).values)
        CHECK_THAT(v, Catch::Matchers::WithinAbs(0.7, 1e-15));
}

TEST_CASE("ghost fill conventions") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    {
        const auto ug = ghost_fill(v, {BcSide::periodic(), BcSide::periodic()});
        CHECK(ug == std::vector<double>{3.0, 4.0, 1.0, 2.0, 3.0, 4.0, 1.0, 2.0});
    }
    {
        const auto ug = ghost_fill(v, {BcSide::neumann(), BcSide::neumann()});
        CHECK(ug == std::vector<double>{2.0, 1.0, 1.0, 2.0, 3.0, 4.0, 4.0, 3.0});
    }
    {
        const auto ug = ghost_fill(v, {BcSide::dirichlet(9.0), BcSide::zero_gradient()});
        CHECK(ug == std::vector<double>{9.0, 9.0, 1.0, 2.0, 3.0, 4.0, 4.0, 3.0});
    }
}

TEST_CASE("uniform periodic state has zero right-hand side") {
    const MeshND mesh = line_mesh(0.0, 1.0, 16);
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    State st;
    st.values.assign(16, 0.7);
    for (const auto& scheme :
         {FluxScheme::fu1(), FluxScheme::fu2(), FluxScheme::cu(), FluxScheme::sgext()}) {
        const auto rhs = assemble_rhs(st, model, mesh, periodic_bc(1), scheme);
        for (double r : rhs) CHECK_THAT(r, Catch::Matchers::WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("pure drift moves mass in the upwind direction") {
    // dV = 1 means velocity -1: mass moves toward smaller x
    auto zero = [](double) { return 0.0; };
    const auto model = linear_drift_custom_diffusion(zero, zero, zero, zero, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 8);
    State st;
    st.values.assign(8, 0.0);
    st.values[4] = 1.0;
    const auto rhs = assemble_rhs(st, model, mesh, periodic_bc(1), FluxScheme::fu1());
    CHECK(rhs[3] > 0.0);
    CHECK(rhs[4] < 0.0);
    CHECK_THAT(rhs[3], Catch::Matchers::WithinRel(1.0 / 0.125, 1e-12));
    CHECK_THAT(rhs[5], Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("mass is conserved in closed boxes") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 40);
    for (const auto& scheme :
         {FluxScheme::fu1(), FluxScheme::fu2(), FluxScheme::cu(), FluxScheme::sgext()}) {
        for (const auto& bc : {periodic_bc(1), neumann_bc(1)}) {
            State st = random_state(mesh, 97, 0.3, 1.5);
            const double m0 = total_mass(st.values, mesh);
            SolverConfig sc;
            sc.flux = scheme;
            sc.dt = 2e-5;
            sc.t_final = 2e-3;
            sc.record_every = 1000;
            const auto res = run(sc, model, mesh, bc, std::move(st));
            CHECK_THAT(total_mass(res.final_state.values, mesh),
                       Catch::Matchers::WithinAbs(m0, 1e-13 * std::max(1.0, m0)));
        }
    }
}

TEST_CASE("stability bound hand value") {
    // h(s) = 2(s-1), dV = 1, dx = 0.1: a single 0.05 bump gives
    // max |dV dist + dh| = |0.1 + 0.1| = 0.2 and dt = 0.01 / 0.4 = 0.025
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 10);
    State st;
    st.values.assign(10, 1.0);
    st.values[5] = 1.05;
    CHECK_THAT(cfl_dt(st, model, mesh), Catch::Matchers::WithinRel(0.025, 1e-12));
    CHECK_THAT(cfl_dt(st, model, mesh, 0.5), Catch::Matchers::WithinRel(0.0125, 1e-12));
}

TEST_CASE("stability bound is infinite on a discrete steady state") {
    const auto model = linear_drift_power_diffusion(2.0, 0.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 10);
    State st;
    st.values.assign(10, 0.8);
    CHECK(cfl_dt(st, model, mesh) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(cfl_dt(st, fokker_planck(1), mesh), std::invalid_argument);
}

TEST_CASE("discrete steady states are fixed points of the step") {
    // h(u) + V = const with h(s) = 2(s-1), V = x: u(x) = 1 + (1 - x)/2
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 20);
    State st;
    st.values.resize(20);
    for (int i = 0; i < 20; ++i) st.values[i] = 1.0 + 0.5 * (1.0 - mesh.axes[0].centers[i]);

    for (const auto& scheme : {FluxScheme::fu1(), FluxScheme::fu2(), FluxScheme::sgext()}) {
        const State next = euler_step(st, model, mesh, neumann_bc(1), scheme, 1e-3);
        for (int i = 0; i < 20; ++i)
            CHECK_THAT(next.values[i], Catch::Matchers::WithinAbs(st.values[i], 1e-13));
    }
}

TEST_CASE("first-order scheme keeps random states nonnegative at the stability bound") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 50);
    for (unsigned seed = 1; seed <= 20; ++seed) {
        State st = random_state(mesh, seed, 0.0, 2.0);
        // the bound is state-dependent (local jumps can steepen transiently),
        // so it is re-evaluated every step
        for (int k = 0; k < 5; ++k)
            st = euler_step(st, model, mesh, neumann_bc(1), FluxScheme::fu1(),
                            cfl_dt(st, model, mesh));
        for (double v : st.values) CHECK(v >= -1e-12);
    }
}

TEST_CASE("second-order scheme keeps random states nonnegative at a quarter of the bound") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 50);
    for (unsigned seed = 31; seed <= 45; ++seed) {
        State st = random_state(mesh, seed, 0.0, 2.0);
        const double dt = 0.25 * cfl_dt(st, model, mesh);
        for (int k = 0; k < 5; ++k) st = euler_step(st, model, mesh, neumann_bc(1), FluxScheme::fu2(), dt);
        for (double v : st.values) CHECK(v >= -1e-10);
    }
}

TEST_CASE("a 2D run with x-only data reproduces the 1D run row by row") {
    // V = x0: no transverse drift, uniform columns stay uniform
    auto model2 = porous_media(2.0);
    model2.V_at = [](std::span<const double> x) { return x[0]; };
    const int nx = 16, ny = 6;
    const MeshND mesh2 =
        build_cartesian({build_uniform_1d(0.0, 1.0, nx), build_uniform_1d(0.0, 1.0, ny)});
    const MeshND mesh1 = line_mesh(0.0, 1.0, nx);

    auto g = [](double x) { return 0.6 + 0.4 * std::sin(3.0 * x); };
    State s2, s1;
    s2.values.resize(mesh2.cell_count());
    s1.values.resize(nx);
    for (int i = 0; i < nx; ++i) {
        s1.values[i] = g(mesh1.axes[0].centers[i]);
        for (int j = 0; j < ny; ++j) s2.values[i * ny + j] = s1.values[i];
    }
    const double dt = 1e-4;
    for (int k = 0; k < 10; ++k) {
        s2 = euler_step(s2, model2, mesh2, neumann_bc(2), FluxScheme::fu2(), dt);
        s1 = euler_step(s1, model2, mesh1, neumann_bc(1), FluxScheme::fu2(), dt);
    }
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            CHECK_THAT(s2.values[i * ny + j], Catch::Matchers::WithinAbs(s1.values[i], 1e-12));
}

TEST_CASE("zero-length run records exactly the initial state") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 8);
    SolverConfig sc;
    sc.flux = FluxScheme::fu2();
    sc.dt = 1e-3;
    sc.t_final = 0.0;
    State st;
    st.values.assign(8, 1.0);
    const auto res = run(sc, model, mesh, neumann_bc(1), std::move(st));
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].time == 0.0);
    CHECK_THAT(res.records[0].mass, Catch::Matchers::WithinRel(1.0, 1e-14));
}

TEST_CASE("recording cadence and snapshots") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 8);
    SolverConfig sc;
    sc.flux = FluxScheme::fu1();
    sc.dt = 1e-3;
    sc.t_final = 1e-2;  // 10 steps
    sc.record_every = 5;
    sc.snapshot_times = {4.5e-3};
    State st;
    st.values.assign(8, 1.0);
    const auto res = run(sc, model, mesh, neumann_bc(1), std::move(st));
    REQUIRE(res.records.size() == 3);  // t = 0, 5e-3, 1e-2
    CHECK_THAT(res.records[1].time, Catch::Matchers::WithinAbs(5e-3, 1e-12));
    REQUIRE(res.snapshots.size() == 1);
    CHECK(res.snapshots[0].first >= 4.5e-3 - 1e-12);
}

TEST_CASE("automatic step selection conserves mass and finishes") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 30);
    State st = random_state(mesh, 7, 0.2, 1.2);
    const double m0 = total_mass(st.values, mesh);
    SolverConfig sc;
    sc.flux = FluxScheme::fu1();
    sc.dt_mode = DtMode::cfl_auto;
    sc.cfl_safety = 0.9;
    sc.t_final = 1e-3;
    sc.record_every = 1000;
    const auto res = run(sc, model, mesh, neumann_bc(1), std::move(st));
    CHECK_THAT(res.final_state.time, Catch::Matchers::WithinAbs(1e-3, 1e-12));
    CHECK_THAT(total_mass(res.final_state.values, mesh),
               Catch::Matchers::WithinAbs(m0, 1e-13 * std::max(1.0, m0)));
}

TEST_CASE("an unstable step raises a located error") {
    const auto model = linear_drift_power_diffusion(2.0, 1.0);
    const MeshND mesh = line_mesh(0.0, 1.0, 20);
    State st = random_state(mesh, 3, 0.5, 2.0);
    SolverConfig sc;
    sc.flux = FluxScheme::fu1();
    sc.dt = 10.0;  // far beyond the stability bound
    sc.t_final = 100.0;
    CHECK_THROWS_AS(run(sc, model, mesh, neumann_bc(1), std::move(st)), SolverError);
}

TEST_CASE("solver configuration validation") {
    SolverConfig sc;
    sc.flux = FluxScheme::fu2();
    sc.dt = 0.0;
    sc.t_final = 1.0;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc.dt = 1e-3;
    sc.record_every = 0;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc.record_every = 1;
    sc.cfl_safety = 1.5;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
    sc.cfl_safety = 1.0;
    CHECK_NOTHROW(sc.validate());
}
