#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvdp/config.hpp"
#include "fvdp/driftdiffusion.hpp"
#include "fvdp/equilibrium.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/solver.hpp"

namespace fvdp {

/// Canonical experiment configurations (example1..example8).
inline RunConfig preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "example1") {
        c.model = "linear_drift_power_diffusion";
        c.gamma = 2.0;
        c.dv = 1.0;
        c.dim = 1;
        c.a[0] = -1.0;
        c.b[0] = 1.0;
        c.n[0] = 100;
        c.bc[0][0].kind = c.bc[0][1].kind = "periodic";
        c.flux = "fu2";
        c.dt = 1e-5;
        c.t_final = 0.1;
        c.record_every = 100;
    } else if (name == "example2") {
        c.model = "linear_drift_piecewise_cubic";
        c.dv = 1.0;
        c.dim = 1;
        c.a[0] = -1.0;
        c.b[0] = 1.0;
        c.n[0] = 100;
        c.bc[0][0].kind = c.bc[0][1].kind = "periodic";
        c.flux = "fu2";
        c.dt = 1e-5;
        c.t_final = 0.01;
        c.record_every = 100;
    } else if (name == "example3") {
        c.kind = "dd";
        c.model = "dd";
        c.gamma = 2.0;
        c.dim = 1;
        c.a[0] = 0.0;
        c.b[0] = 1.0;
        c.n[0] = 64;
        c.flux = "fu2";
        c.dt = 5e-5;
        c.t_final = 10.0;
        c.record_every = 2000;
        c.equilibrium = "thermal";
    } else if (name == "example4") {
        c.kind = "dd";
        c.model = "dd";
        c.gamma = 2.0;
        c.dim = 2;
        c.a = {0.0, 0.0, 0.0};
        c.b = {1.0, 1.0, 1.0};
        c.n = {32, 32, 1};
        c.flux = "fu2";
        c.dt = 1e-4;
        c.t_final = 10.0;
        c.record_every = 1000;
        c.equilibrium = "thermal";
    } else if (name == "example5") {
        c.model = "porous_media";
        c.m = 5.0;
        c.dim = 1;
        c.a[0] = -5.5;
        c.b[0] = 5.5;
        c.n[0] = 160;
        c.flux = "fu2";
        c.dt = 1e-4;
        c.t_final = 10.0;
        c.record_every = 100;
        c.equilibrium = "barenblatt";
    } else if (name == "example6") {
        c.model = "porous_media";
        c.m = 4.0;
        c.dim = 2;
        c.a = {-10.0, -10.0, 0.0};
        c.b = {10.0, 10.0, 1.0};
        c.n = {200, 200, 1};
        c.flux = "fu2";
        c.dt = 1e-4;
        c.t_final = 10.0;
        c.record_every = 1000;
        c.equilibrium = "barenblatt";
    } else if (name == "example7") {
        c.model = "fokker_planck";
        c.k = -1;
        c.dim = 3;
        c.a = {-8.0, -8.0, -8.0};
        c.b = {8.0, 8.0, 8.0};
        c.n = {20, 20, 20};  // scaled default; full scale is 40^3, T = 10
        c.flux = "fu2";
        c.dt = 1e-4;
        c.t_final = 2.0;
        c.record_every = 100;
        c.equilibrium = "fermi_bose";
    } else if (name == "example8") {
        c.model = "buckley_leverett";
        c.epsilon = 0.1;
        c.epsilon_list = {1e-1, 1e-2, 1e-3, 0.0};
        c.dim = 1;
        c.a[0] = 0.0;
        c.b[0] = 1.0;
        c.n[0] = 100;
        c.bc[0][0] = {"dirichlet", 1.0};
        c.bc[0][1] = {"zero_gradient", 0.0};
        c.flux = "fu2";
        c.dt = 1e-4;
        c.t_final = 0.2;
        c.snapshot_times = {0.1, 0.2};
        c.record_every = 100;
    } else {
        throw std::invalid_argument("preset: unknown name '" + name + "'");
    }
    return c;
}

/// Promote the scaled example7 default to the full-scale experiment.
inline void apply_full_scale(RunConfig& c) {
    c.full_scale = true;
    if (c.preset == "example7") {
        c.n = {40, 40, 40};
        c.t_final = 10.0;
    }
}

inline ProblemModel make_model(const RunConfig& c) {
    if (c.model == "porous_media") return porous_media(c.m);
    if (c.model == "fokker_planck") return fokker_planck(c.k);
    if (c.model == "linear_drift_power_diffusion")
        return linear_drift_power_diffusion(c.gamma, c.dv);
    if (c.model == "linear_drift_piecewise_cubic") return linear_drift_piecewise_cubic(c.dv);
    if (c.model == "buckley_leverett") return buckley_leverett(c.epsilon);
    throw std::invalid_argument("make_model: no scalar model '" + c.model + "'");
}

inline MeshND make_mesh(const RunConfig& c) {
    std::vector<Mesh1D> axes;
    for (int a = 0; a < c.dim; ++a) axes.push_back(build_uniform_1d(c.a[a], c.b[a], c.n[a]));
    return build_cartesian(std::move(axes));
}

inline BoundaryCondition make_bc(const RunConfig& c) {
    BoundaryCondition bc;
    for (int a = 0; a < c.dim; ++a) {
        AxisBc ab;
        auto side = [](const RunConfig::SideSpec& s) {
            if (s.kind == "periodic") return BcSide::periodic();
            if (s.kind == "neumann") return BcSide::neumann();
            if (s.kind == "zero_gradient") return BcSide::zero_gradient();
            if (s.kind == "dirichlet") return BcSide::dirichlet(s.value);
            throw std::invalid_argument("make_bc: unknown boundary kind '" + s.kind + "'");
        };
        ab.left = side(c.bc[a][0]);
        ab.right = side(c.bc[a][1]);
        bc.axes.push_back(ab);
    }
    return bc;
}

/// Initial data of the scalar presets.
inline PointFn preset_initial(const RunConfig& c) {
    const std::string& p = c.preset;
    constexpr double pi = std::numbers::pi;
    if (p == "example1")
        return [pi](std::span<const double> x) { return 0.5 + 0.5 * std::sin(pi * x[0]); };
    if (p == "example2")
        return [pi](std::span<const double> x) { return 1.0 + 0.5 * std::sin(pi * x[0]); };
    if (p == "example5")
        return [](std::span<const double> x) {
            const double v = x[0];
            return ((v > -3.7 && v < -0.7) || (v > 0.7 && v < 3.7)) ? 1.0 : 0.0;
        };
    if (p == "example6")
        return [](std::span<const double> x) {
            const double r1 = (x[0] - 2.0) * (x[0] - 2.0) + (x[1] + 2.0) * (x[1] + 2.0);
            const double r2 = (x[0] + 2.0) * (x[0] + 2.0) + (x[1] - 2.0) * (x[1] - 2.0);
            if (r1 < 6.0) return std::exp(-1.0 / (6.0 - r1));
            if (r2 < 6.0) return std::exp(-1.0 / (6.0 - r2));
            return 0.0;
        };
    if (p == "example7")
        return [](std::span<const double> x) {
            auto bump = [&](double cx, double cy, double cz) {
                const double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy) +
                                  (x[2] - cz) * (x[2] - cz);
                return std::exp(-0.5 * r2);
            };
            const double norm = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi));
            return norm * (bump(2, 2, 2) + bump(-2, -2, -2) + bump(2, -2, 2) + bump(-2, 2, -2));
        };
    if (p == "example8")
        return [](std::span<const double> x) {
            return x[0] <= 1.0 / 3.0 ? 1.0 - 3.0 * x[0] : 0.0;
        };
    throw std::invalid_argument("preset_initial: preset '" + p + "' has no scalar initial data");
}

/// Doping profile of the drift-diffusion presets.
inline std::vector<double> preset_doping(const RunConfig& c, const MeshND& mesh) {
    std::vector<double> doping(mesh.cell_count(), 0.0);
    if (c.preset == "example3") {
        for (std::size_t i = 0; i < doping.size(); ++i)
            doping[i] = mesh.cell_center(i)[0] <= 0.5 ? -1.0 : 1.0;
    } else if (c.preset == "example4") {
        for (std::size_t i = 0; i < doping.size(); ++i)
            doping[i] = mesh.cell_center(i)[1] <= 0.5 ? -1.0 : 1.0;
    } else {
        throw std::invalid_argument("preset_doping: preset '" + c.preset + "' is not a dd preset");
    }
    return doping;
}

/// Initial densities of the drift-diffusion presets.
inline void preset_dd_initial(const RunConfig& c, const MeshND& mesh, std::vector<double>& N,
                              std::vector<double>& P) {
    const std::size_t nc = mesh.cell_count();
    N.assign(nc, 0.0);
    P.assign(nc, 0.0);
    if (c.preset == "example3") {
        for (std::size_t i = 0; i < nc; ++i) {
            const double x = mesh.cell_center(i)[0];
            N[i] = x <= 0.5 ? 0.0 : 1.0;
            P[i] = x <= 0.5 ? 1.0 : 0.0;
        }
    } else if (c.preset == "example4") {
        for (std::size_t i = 0; i < nc; ++i) {
            const double y = mesh.cell_center(i)[1];
            N[i] = y <= 0.5 ? 0.0 : 1.0;
            P[i] = y <= 0.5 ? 1.0 : 0.0;
        }
    } else {
        throw std::invalid_argument("preset_dd_initial: preset '" + c.preset +
                                    "' is not a dd preset");
    }
}

/// Contact layout of the drift-diffusion presets.
/// example3: ohmic contacts at both ends of (0, 1).
/// example4: a PN junction on the unit square; contact A on the lower edge
/// for x in [0, 1/4] with (N, P, V) = (0, 1, -1), contact B on the upper
/// edge for x in [3/4, 1] with (1, 0, 1), insulating elsewhere.
inline DDBoundary preset_dd_boundary(const RunConfig& c) {
    DDBoundary bc;
    if (c.preset == "example3") {
        bc.contact = [](int axis, int side, std::array<double, 3>) -> std::optional<DDContact> {
            if (axis != 0) return std::nullopt;
            if (side == 0) return DDContact{0.0, 1.0, -1.0};
            return DDContact{1.0, 0.0, 1.0};
        };
    } else if (c.preset == "example4") {
        bc.contact = [](int axis, int side, std::array<double, 3> x) -> std::optional<DDContact> {
            if (axis != 1) return std::nullopt;
            if (side == 0 && x[0] <= 0.25) return DDContact{0.0, 1.0, -1.0};
            if (side == 1 && x[0] >= 0.75) return DDContact{1.0, 0.0, 1.0};
            return std::nullopt;
        };
    } else {
        throw std::invalid_argument("preset_dd_boundary: preset '" + c.preset +
                                    "' is not a dd preset");
    }
    return bc;
}

/// Equilibrium profile for the configured kind, mass-matched to `mass`.
inline std::optional<EquilibriumProfile> make_equilibrium(const RunConfig& c,
                                                          const ProblemModel& model,
                                                          const MeshND& mesh, double mass) {
    if (c.equilibrium == "none") return std::nullopt;
    if (c.equilibrium == "barenblatt") return barenblatt_profile(model, mesh, mass);
    if (c.equilibrium == "fermi_bose") return fokker_planck_profile(model, mesh, mass);
    throw std::invalid_argument("make_equilibrium: '" + c.equilibrium +
                                "' is not a scalar equilibrium kind");
}

}  // namespace fvdp
