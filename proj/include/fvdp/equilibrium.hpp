#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/flux.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/solver.hpp"

namespace fvdp {

/// A discrete steady state: pointwise profile values at cell centers plus
/// the normalization parameter that was solved for.
struct EquilibriumProfile {
    std::vector<double> values;
    double mass = 0.0;       // discrete mass of `values`
    double parameter = 0.0;  // C-bar (Barenblatt) or beta-bar (quantum gases)
};

namespace detail {

/// Solve mass_of(p) = target for a continuous monotone mass_of by bracket
/// expansion and bisection. `increasing` states the monotonicity; [p_lo,
/// p_hi] is the initial bracket, expanded geometrically on the open side(s).
inline double solve_mass_monotone(const std::function<double(double)>& mass_of, double target,
                                  double p_lo, double p_hi, bool increasing, bool lo_fixed,
                                  bool hi_fixed) {
    auto deficit = [&](double p) { return increasing ? mass_of(p) - target : target - mass_of(p); };
    double span = p_hi - p_lo;
    for (int i = 0; i < 80 && deficit(p_lo) > 0.0; ++i) {
        if (lo_fixed)
            throw std::invalid_argument("equilibrium: target mass out of admissible range");
        span *= 2.0;
        p_lo -= span;
    }
    for (int i = 0; i < 80 && deficit(p_hi) < 0.0; ++i) {
        if (hi_fixed)
            throw std::invalid_argument("equilibrium: target mass out of admissible range");
        span *= 2.0;
        p_hi += span;
    }
    if (deficit(p_lo) > 0.0 || deficit(p_hi) < 0.0)
        throw std::runtime_error("equilibrium: failed to bracket the target mass");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (p_lo + p_hi);
        if (mid == p_lo || mid == p_hi) break;
        (deficit(mid) < 0.0 ? p_lo : p_hi) = mid;
    }
    return 0.5 * (p_lo + p_hi);
}

inline double squared_radius(const MeshND& mesh, std::size_t cell) {
    const auto x = mesh.cell_center(cell);
    double r2 = 0.0;
    for (int a = 0; a < mesh.dim(); ++a) r2 += x[a] * x[a];
    return r2;
}

}  // namespace detail

/// Barenblatt profile of the porous media equation u_t = div(x u + grad u^m):
///   u(x) = (1 + (m-1)/m (C - |x|^2/2))_+^(1/(m-1)),
/// with C chosen so that the discrete mass (sum of cell volumes times
/// center values) equals `target_mass`. h(u) + V(x) is then constant on the
/// support at the cell centers, making the profile an exact fixed point of
/// the fully upwind schemes.
inline EquilibriumProfile barenblatt_profile(const ProblemModel& model, const MeshND& mesh,
                                             double target_mass) {
    if (model.name != "porous_media")
        throw std::invalid_argument("barenblatt_profile: porous media model required");
    if (!(target_mass > 0.0))
        throw std::invalid_argument("barenblatt_profile: target mass must be > 0");
    const double m = model.params.m;
    const std::size_t nc = mesh.cell_count();

    std::vector<double> r2(nc);
    for (std::size_t c = 0; c < nc; ++c) r2[c] = detail::squared_radius(mesh, c);

    auto fill = [&](double C, std::vector<double>& out) {
        out.resize(nc);
        double mass = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double base = 1.0 + (m - 1.0) / m * (C - 0.5 * r2[c]);
            out[c] = base > 0.0 ? std::pow(base, 1.0 / (m - 1.0)) : 0.0;
            mass += mesh.cell_volume(c) * out[c];
        }
        return mass;
    };

    std::vector<double> tmp;
    const double C = detail::solve_mass_monotone([&](double p) { return fill(p, tmp); },
                                                 target_mass, -1.0, 1.0, true, false, false);
    EquilibriumProfile prof;
    prof.parameter = C;
    prof.mass = fill(C, prof.values);

    // the profile must be fully supported inside the mesh: a positive value
    // in any boundary cell means the requested mass does not fit the domain
    for (std::size_t c = 0; c < nc; ++c) {
        const auto idx = mesh.multi_index(c);
        bool boundary = false;
        for (int a = 0; a < mesh.dim(); ++a)
            boundary = boundary || idx[a] == 0 || idx[a] == mesh.axes[a].n_cells() - 1;
        if (boundary && prof.values[c] > 0.0)
            throw std::invalid_argument(
                "barenblatt_profile: profile support exceeds the mesh; reduce the mass or "
                "enlarge the domain");
    }
    return prof;
}

/// Convenience constructor from the exponent alone.
inline EquilibriumProfile barenblatt(const MeshND& mesh, double m, double target_mass) {
    return barenblatt_profile(porous_media(m), mesh, target_mass);
}

/// Fermi-Dirac (k = -1) or Bose-Einstein (k = +1) profile of the quantum
/// Fokker-Planck model: u(x) = 1 / (beta e^{|x|^2/2} - k), beta solved so the
/// discrete mass matches. For bosons the admissible mass is bounded by the
/// critical mass (beta -> 1); supercritical targets throw.
inline EquilibriumProfile fokker_planck_profile(const ProblemModel& model, const MeshND& mesh,
                                                double target_mass) {
    if (model.name != "fokker_planck")
        throw std::invalid_argument("fokker_planck_profile: fokker_planck model required");
    if (!(target_mass > 0.0))
        throw std::invalid_argument("fokker_planck_profile: target mass must be > 0");
    const double kd = static_cast<double>(model.params.k);
    const std::size_t nc = mesh.cell_count();

    std::vector<double> ev(nc);  // e^{V(x_c)}
    for (std::size_t c = 0; c < nc; ++c) ev[c] = std::exp(0.5 * detail::squared_radius(mesh, c));

    auto fill = [&](double beta, std::vector<double>& out) {
        out.resize(nc);
        double mass = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            out[c] = 1.0 / (beta * ev[c] - kd);
            mass += mesh.cell_volume(c) * out[c];
        }
        return mass;
    };

    std::vector<double> tmp;
    double beta;
    if (model.params.k > 0) {
        // mass decreasing in beta on (1, inf); beta = 1 is the critical gas
        double beta_lo = 1.0;
        const double crit = fill(1.0, tmp);
        if (!(target_mass < crit))
            throw std::invalid_argument(
                "fokker_planck_profile: boson mass at or above the critical mass");
        beta = detail::solve_mass_monotone([&](double p) { return fill(p, tmp); }, target_mass,
                                           beta_lo, 2.0, false, true, false);
    } else {
        // mass decreasing in beta on (0, inf), bounded by the domain volume
        double vol = 0.0;
        for (std::size_t c = 0; c < nc; ++c) vol += mesh.cell_volume(c);
        if (!(target_mass < vol))
            throw std::invalid_argument(
                "fokker_planck_profile: fermion mass must be below the domain volume");
        beta = detail::solve_mass_monotone([&](double p) { return fill(p, tmp); }, target_mass,
                                           1e-8, 1.0, false, false, false);
    }
    EquilibriumProfile prof;
    prof.parameter = beta;
    prof.mass = fill(beta, prof.values);
    return prof;
}

/// Convenience constructor from the statistics sign alone (+1 boson, -1 fermion).
inline EquilibriumProfile fermi_bose(const MeshND& mesh, int k, double target_mass) {
    return fokker_planck_profile(fokker_planck(k), mesh, target_mass);
}

/// Discrete critical mass of the boson gas: the mass of the beta = 1 profile.
inline double boson_critical_mass(const MeshND& mesh) {
    double mass = 0.0;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        const double ev = std::exp(0.5 * detail::squared_radius(mesh, c));
        mass += mesh.cell_volume(c) / (ev - 1.0);
    }
    return mass;
}

struct ResidualReport {
    double max_residual = 0.0;   // max over interfaces of |d htilde(U^eq) + dV|
    std::size_t skipped = 0;     // interior interfaces with a zero neighbor
    std::size_t evaluated = 0;
};

/// Discrete steady-state relation check: at every interior interface with
/// both neighbors positive, |(htilde(U_{i+1}) - htilde(U_i))/dist + dV|.
/// Interfaces touching a zero cell are skipped and counted.
inline ResidualReport equilibrium_residual(std::span<const double> values,
                                           const ProblemModel& model, const MeshND& mesh,
                                           const BoundaryCondition& bc) {
    bc.validate(mesh.dim());
    if (values.size() != mesh.cell_count())
        throw std::invalid_argument("equilibrium_residual: shape mismatch");
    const auto dv_axes = potential_gradients(model, mesh, bc);
    ResidualReport rep;
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        const auto& dv = dv_axes[axis];
        detail::for_each_line(mesh, axis, [&](std::size_t, auto flat_of) {
            for (int k = 1; k < n; ++k) {
                const double um = values[flat_of(k - 1)], up = values[flat_of(k)];
                if (um <= 0.0 || up <= 0.0) {
                    ++rep.skipped;
                    continue;
                }
                const double dh =
                    (htilde_of(model, up) - htilde_of(model, um)) / ax.interface_distances[k];
                rep.max_residual = std::max(rep.max_residual, std::abs(dh + dv[k]));
                ++rep.evaluated;
            }
        });
    }
    return rep;
}

}  // namespace fvdp
