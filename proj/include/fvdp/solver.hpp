#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/detail/sweep.hpp"
#include "fvdp/diagnostics.hpp"
#include "fvdp/flux.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/potential.hpp"

namespace fvdp {

struct State {
    std::vector<double> values;
    double time = 0.0;
};

enum class DtMode { fixed, cfl_auto };

struct SolverConfig {
    FluxScheme flux;
    double dt = 0.0;
    double t_final = 0.0;
    double cfl_safety = 1.0;
    DtMode dt_mode = DtMode::fixed;
    long record_every = 1;
    std::vector<double> snapshot_times;
    // accumulate sum of dt * I over the run (costs one dissipation
    // evaluation per step)
    bool track_dissipation_integral = false;

    void validate() const {
        flux.validate();
        if (dt_mode == DtMode::fixed && !(dt > 0.0))
            throw std::invalid_argument("solver: fixed mode requires dt > 0");
        if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
            throw std::invalid_argument("solver: cfl_safety must be in (0, 1]");
        if (t_final < 0.0) throw std::invalid_argument("solver: t_final must be >= 0");
        if (record_every < 1) throw std::invalid_argument("solver: record_every must be >= 1");
    }
};

/// Numerical failure of a time step, with the offending location.
struct SolverError : std::runtime_error {
    long step;
    std::size_t cell;
    double value;
    SolverError(long step_, std::size_t cell_, double value_, const std::string& what_)
        : std::runtime_error(what_), step(step_), cell(cell_), value(value_) {}
};

using PointFn = std::function<double(std::span<const double>)>;

/// Cell averages of u0 by tensorized 3-point Gauss-Legendre quadrature.
inline State project_initial(const PointFn& u0, const MeshND& mesh) {
    static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const int d = mesh.dim();
    State st;
    st.values.resize(mesh.cell_count());
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (std::size_t c = 0; c < st.values.size(); ++c) {
        const auto idx = mesh.multi_index(c);
        double sum = 0.0;
        const int npts = d == 1 ? 3 : (d == 2 ? 9 : 27);
        for (int q = 0; q < npts; ++q) {
            int qq = q;
            double w = 1.0;
            for (int a = 0; a < d; ++a) {
                const int qa = qq % 3;
                qq /= 3;
                p[a] = mesh.axes[a].centers[idx[a]] + 0.5 * mesh.axes[a].widths[idx[a]] * gx[qa];
                w *= 0.5 * gw[qa];
            }
            sum += w * u0(std::span<const double>(p.data(), d));
        }
        st.values[c] = sum;
    }
    return st;
}

/// Ghost-filled copy of a 1D value array: two ghost cells per side.
inline std::vector<double> ghost_fill(std::span<const double> values, const AxisBc& bc) {
    std::vector<double> ug(values.size() + 4);
    for (std::size_t j = 0; j < values.size(); ++j) ug[j + 2] = values[j];
    detail::fill_ghosts(ug, bc);
    return ug;
}

namespace detail {

template <class FluxOut>
inline void assemble_axis(std::span<const double> values, const ProblemModel& model,
                          const MeshND& mesh, const AxisBc& ab, const FluxScheme& scheme,
                          std::span<const double> dv, int axis, std::span<double> rhs,
                          FluxOut&& on_flux) {
    const Mesh1D& ax = mesh.axes[axis];
    const int n = ax.n_cells();
    const auto dist = axis_distances(ax, ab.periodic());
    std::vector<double> ug(static_cast<std::size_t>(n) + 4);
    std::vector<double> flux(static_cast<std::size_t>(n) + 1);

    for_each_line(mesh, axis, [&](std::size_t, auto flat_of) {
        for (int j = 0; j < n; ++j) ug[j + 2] = values[flat_of(j)];
        fill_ghosts(ug, ab);
        for (int k = 0; k <= n; ++k) {
            if (k == n && ab.periodic()) {
                flux[n] = flux[0];
                continue;
            }
            if ((k == 0 && ab.left.kind == BcKind::neumann_zero_flux) ||
                (k == n && ab.right.kind == BcKind::neumann_zero_flux)) {
                flux[k] = 0.0;
                continue;
            }
            const InterfaceStencil s{ug[k], ug[k + 1], ug[k + 2], ug[k + 3], dv[k], dist[k]};
            flux[k] = interface_flux(model, scheme, s);
        }
        for (int j = 0; j < n; ++j)
            rhs[flat_of(j)] -= (flux[j + 1] - flux[j]) / ax.widths[j];
        on_flux(flux);
    });
}

}  // namespace detail

/// Semi-discrete right-hand side dU/dt = -sum_axes (F_+ - F_-) / width.
inline std::vector<double> assemble_rhs(const State& state, const ProblemModel& model,
                                        const MeshND& mesh, const BoundaryCondition& bc,
                                        const FluxScheme& scheme) {
    bc.validate(mesh.dim());
    if (state.values.size() != mesh.cell_count())
        throw std::invalid_argument("assemble_rhs: state/mesh size mismatch");
    const auto dv_axes = potential_gradients(model, mesh, bc);
    std::vector<double> rhs(state.values.size(), 0.0);
    for (int axis = 0; axis < mesh.dim(); ++axis)
        detail::assemble_axis(state.values, model, mesh, bc.axes[axis], scheme, dv_axes[axis],
                              axis, rhs, [](std::span<const double>) {});
    return rhs;
}

/// Largest stable dt of the first-order scheme:
///   dt = safety * min_i dx_i^2 / (2 max_k |A_k| * dist_k)
/// with |A_k| * dist_k = |dV*dist + h(U_k) - h(U_{k-1})| over the interior
/// interfaces of every axis. Returns +inf when the maximum vanishes
/// (discrete equilibrium).
inline double cfl_dt(const State& state, const ProblemModel& model, const MeshND& mesh,
                     double safety = 1.0) {
    if (!model.linear_convection)
        throw std::invalid_argument("cfl_dt: stated for linear-convection models only");
    BoundaryCondition bc = BoundaryCondition::uniform(mesh.dim(), {BcSide::neumann(), BcSide::neumann()});
    const auto dv_axes = potential_gradients(model, mesh, bc);

    double min_dx2 = std::numeric_limits<double>::infinity();
    for (const auto& ax : mesh.axes)
        for (double w : ax.widths) min_dx2 = std::min(min_dx2, w * w);

    double max_jump = 0.0;
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        detail::for_each_line(mesh, axis, [&](std::size_t, auto flat_of) {
            for (int k = 1; k < n; ++k) {
                const double hj = h_of(model, state.values[flat_of(k)]) -
                                  h_of(model, state.values[flat_of(k - 1)]);
                const double vj = dv_axes[axis][k] * ax.interface_distances[k];
                max_jump = std::max(max_jump, std::abs(vj + hj));
            }
        });
    }
    if (max_jump == 0.0) return std::numeric_limits<double>::infinity();
    return safety * min_dx2 / (2.0 * max_jump);
}

namespace detail {

inline void check_state(const std::vector<double>& values, const ProblemModel& model, long step) {
    const double tol = 1e-10;
    for (std::size_t c = 0; c < values.size(); ++c) {
        const double v = values[c];
        if (!std::isfinite(v))
            throw SolverError(step, c, v, "solver: non-finite value at step " +
                                              std::to_string(step) + ", cell " + std::to_string(c));
        if (v < model.lo - tol || v > model.hi + tol)
            throw SolverError(step, c, v,
                              "solver: admissible-range violation at step " + std::to_string(step) +
                                  ", cell " + std::to_string(c) + ", value " + std::to_string(v));
    }
}

}  // namespace detail

inline State euler_step(const State& state, const ProblemModel& model, const MeshND& mesh,
                        const BoundaryCondition& bc, const FluxScheme& scheme, double dt,
                        long step_index = 0) {
    if (!(dt > 0.0)) throw std::invalid_argument("euler_step: dt must be > 0");
    const auto rhs = assemble_rhs(state, model, mesh, bc, scheme);
    State next;
    next.values.resize(state.values.size());
    for (std::size_t c = 0; c < rhs.size(); ++c)
        next.values[c] = state.values[c] + dt * rhs[c];
    next.time = state.time + dt;
    detail::check_state(next.values, model, step_index);
    return next;
}

struct RunResult {
    State final_state;
    std::vector<DiagnosticsRecord> records;
    std::vector<std::pair<double, std::vector<double>>> snapshots;
    double dissipation_time_integral = 0.0;  // left-endpoint sum of dt * I
};

/// Advance to t_final, recording diagnostics every record_every steps (plus
/// the initial and final states) and snapshots at the listed times.
inline RunResult run(const SolverConfig& config, const ProblemModel& model, const MeshND& mesh,
                     const BoundaryCondition& bc, State initial,
                     const std::vector<double>* equilibrium = nullptr) {
    config.validate();
    bc.validate(mesh.dim());

    RunResult result;
    State state = std::move(initial);
    detail::check_state(state.values, model, 0);

    auto record = [&](const State& st) {
        DiagnosticsRecord rec;
        rec.time = st.time;
        rec.mass = total_mass(st.values, mesh);
        if (equilibrium) {
            rec.entropy = discrete_entropy(st.values, *equilibrium, model, mesh);
            rec.l1_to_equilibrium = l1_distance(st.values, *equilibrium, mesh);
        } else {
            // absolute entropy: sum m(K) (V u + H(u))
            double e = 0.0;
            for (std::size_t c = 0; c < st.values.size(); ++c) {
                const auto x = mesh.cell_center(c);
                const double v = model.V_at(std::span<const double>(x.data(), mesh.dim()));
                e += mesh.cell_volume(c) * (v * st.values[c] + model.H(st.values[c]));
            }
            rec.entropy = e;
            rec.l1_to_equilibrium = 0.0;
        }
        rec.dissipation = discrete_dissipation(st.values, model, mesh, bc, config.flux);
        result.records.push_back(rec);
        return rec;
    };

    std::size_t next_snapshot = 0;
    auto snapshot_due = [&](double t) {
        while (next_snapshot < config.snapshot_times.size() &&
               t >= config.snapshot_times[next_snapshot] - 1e-12) {
            result.snapshots.emplace_back(t, state.values);
            ++next_snapshot;
        }
    };

    record(state);
    snapshot_due(state.time);

    const double t_end = config.t_final;
    long step = 0;
    const double eps_t = 1e-12 * std::max(1.0, t_end);
    while (state.time < t_end - eps_t) {
        double dt = config.dt_mode == DtMode::fixed
                        ? config.dt
                        : cfl_dt(state, model, mesh, config.cfl_safety);
        dt = std::min(dt, t_end - state.time);
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw SolverError(step, 0, dt, "solver: invalid time step");

        if (config.track_dissipation_integral) {
            const double i_now = discrete_dissipation(state.values, model, mesh, bc, config.flux);
            result.dissipation_time_integral += dt * i_now;
        }

        state = euler_step(state, model, mesh, bc, config.flux, dt, step + 1);
        ++step;
        if (step % config.record_every == 0 || state.time >= t_end - eps_t) record(state);
        snapshot_due(state.time);
    }
    if (result.records.empty() || result.records.back().time != state.time) record(state);

    result.final_state = std::move(state);
    return result;
}

}  // namespace fvdp
