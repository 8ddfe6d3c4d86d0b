#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/solver.hpp"

namespace fvdp {

struct ConvergenceRow {
    int n_cells = 0;       // coarse cell count of the pair
    double l1_error = 0.0; // || u_n - restrict(u_2n) ||_L1 at t_final
    double order = std::numeric_limits<double>::quiet_NaN();  // NaN on the first row
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double dt_finest = 0.0;  // time step used at the finest level
};

struct StudySetup {
    ProblemModel model;
    BoundaryCondition bc;   // one AxisBc, 1D studies
    PointFn initial;
    double a = 0.0, b = 0.0;  // domain
    double t_final = 0.0;
    double dt_cap = 1e-6;     // upper bound of the per-level dt rule
};

namespace detail {

/// max r'(u) over the value range of a state (diffusion stiffness bound)
inline double max_diffusivity(const ProblemModel& model, const std::vector<double>& values) {
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double best = 0.0;
    constexpr int samples = 65;
    for (int i = 0; i < samples; ++i) {
        const double u = lo + (hi - lo) * i / (samples - 1);
        best = std::max(best, std::abs(model.r_prime(u)));
    }
    return best;
}

/// dt rule for a study level: cap, a fifth of the advective CFL bound on the
/// initial data, and 0.4x the explicit diffusion stability bound
/// dx^2/(2 max r').
inline double study_dt(const StudySetup& s, const MeshND& mesh, const State& init) {
    double dt = s.dt_cap;
    if (s.model.linear_convection) dt = std::min(dt, 0.2 * cfl_dt(init, s.model, mesh));
    const double dmax = max_diffusivity(s.model, init.values);
    if (dmax > 0.0) {
        const double dx = mesh.axes[0].widths[0];
        dt = std::min(dt, 0.4 * dx * dx / (2.0 * dmax));
    }
    return dt;
}

}  // namespace detail

/// Grid-refinement error study: run every level to t_final, compare each
/// consecutive pair by restricting the finer solution to the coarser grid,
/// and report observed orders between consecutive pair errors.
///
/// All levels run at the *same* dt, chosen by the dt rule on the finest
/// level. A constant-in-levels dt keeps the temporal error (nearly) common
/// to both members of each pair, so the pair difference isolates the
/// spatial error; a per-level dt pollutes the observed spatial orders.
inline ConvergenceTable convergence_study(const StudySetup& setup, const FluxScheme& scheme,
                                          const std::vector<int>& levels) {
    if (levels.size() < 2)
        throw std::invalid_argument("convergence_study: need at least 2 levels");
    for (std::size_t j = 0; j + 1 < levels.size(); ++j)
        if (levels[j + 1] != 2 * levels[j])
            throw std::invalid_argument("convergence_study: levels must be successive doublings");

    std::vector<MeshND> meshes;
    std::vector<std::vector<double>> finals;
    ConvergenceTable table;
    {
        const MeshND finest = build_cartesian({build_uniform_1d(setup.a, setup.b, levels.back())});
        const State finit = project_initial(setup.initial, finest);
        table.dt_finest = detail::study_dt(setup, finest, finit);
    }
    for (std::size_t j = 0; j < levels.size(); ++j) {
        MeshND mesh = build_cartesian({build_uniform_1d(setup.a, setup.b, levels[j])});
        State init = project_initial(setup.initial, mesh);

        SolverConfig cfg;
        cfg.flux = scheme;
        cfg.dt = table.dt_finest;
        cfg.t_final = setup.t_final;
        cfg.record_every = std::numeric_limits<long>::max() / 2;

        RunResult res = run(cfg, setup.model, mesh, setup.bc, std::move(init));
        meshes.push_back(std::move(mesh));
        finals.push_back(std::move(res.final_state.values));
    }

    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        ConvergenceRow row;
        row.n_cells = levels[j];
        const auto restricted = restrict_halving(finals[j + 1], meshes[j + 1]);
        row.l1_error = l1_distance(finals[j], restricted, meshes[j]);
        if (!table.rows.empty() && row.l1_error > 0.0 && table.rows.back().l1_error > 0.0)
            row.order = std::log2(table.rows.back().l1_error / row.l1_error);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace fvdp
