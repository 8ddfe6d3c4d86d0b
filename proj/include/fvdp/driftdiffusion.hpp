#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvdp/detail/sweep.hpp"
#include "fvdp/flux.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"

namespace fvdp {

/// Generalized inverse of the enthalpy h(s) = (g/(g-1))(s^(g-1) - 1):
/// g_of(s) = (1 + ((g-1)/g) s)^(1/(g-1)) above h(0+), 0 at or below it.
inline double g_of(double gamma, double s) {
    if (!(gamma > 1.0)) throw std::invalid_argument("g_of: require gamma > 1");
    const double c = (gamma - 1.0) / gamma;
    const double base = 1.0 + c * s;
    if (base <= 0.0) return 0.0;
    return std::pow(base, 1.0 / (gamma - 1.0));
}

inline double g_prime(double gamma, double s) {
    const double c = (gamma - 1.0) / gamma;
    const double base = 1.0 + c * s;
    if (base <= 0.0) return 0.0;
    return std::pow(base, (2.0 - gamma) / (gamma - 1.0)) / gamma;
}

/// Dirichlet data triple at an ohmic contact.
struct DDContact {
    double N = 0.0, P = 0.0, V = 0.0;
};

/// User-level boundary description: a function deciding, for each boundary
/// face (axis, side 0 = low / 1 = high, face center), whether it is an ohmic
/// contact (returns the data triple) or insulating (returns nullopt).
struct DDBoundary {
    std::function<std::optional<DDContact>(int axis, int side, std::array<double, 3> x)> contact;
};

/// Per-mesh precomputation of the boundary: one optional contact per
/// boundary face (indexed by sweep line), plus the derived quasi-Fermi
/// constants where determined by the contact data.
struct DDBoundaryMap {
    // contact[axis][side][line_id]
    std::vector<std::array<std::vector<std::optional<DDContact>>, 2>> contact;
    std::optional<double> alpha_N, alpha_P;
    std::size_t n_contacts = 0;

    bool has_contact() const { return n_contacts > 0; }
};

inline DDBoundaryMap build_dd_boundary(const DDBoundary& bc, const MeshND& mesh, double gamma) {
    if (!bc.contact) throw std::invalid_argument("dd boundary: contact function required");
    const ProblemModel species = dd_continuity(gamma, -1);
    DDBoundaryMap map;
    map.contact.resize(mesh.dim());
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        std::size_t lines = 1;
        for (int a = 0; a < mesh.dim(); ++a)
            if (a != axis) lines *= static_cast<std::size_t>(mesh.axes[a].n_cells());
        map.contact[axis][0].resize(lines);
        map.contact[axis][1].resize(lines);
        detail::for_each_line(mesh, axis, [&](std::size_t line, auto flat_of) {
            const auto idx0 = mesh.multi_index(flat_of(0));
            for (int side = 0; side < 2; ++side) {
                std::array<double, 3> x{0.0, 0.0, 0.0};
                for (int a = 0; a < mesh.dim(); ++a) x[a] = mesh.axes[a].centers[idx0[a]];
                x[axis] = side == 0 ? mesh.axes[axis].a() : mesh.axes[axis].b();
                auto c = bc.contact(axis, side, x);
                if (!c) continue;
                if (c->N < 0.0 || c->P < 0.0)
                    throw std::invalid_argument("dd boundary: negative contact density");
                map.contact[axis][side][line] = c;
                ++map.n_contacts;

                auto fuse = [](std::optional<double>& slot, double v, const char* what) {
                    if (!slot) {
                        slot = v;
                    } else if (std::abs(*slot - v) > 1e-10) {
                        throw std::invalid_argument(std::string("dd boundary: inconsistent ") +
                                                    what + " across contacts");
                    }
                };
                if (c->N > 0.0) fuse(map.alpha_N, h_of(species, c->N) - c->V, "quasi-Fermi level (N)");
                if (c->P > 0.0) fuse(map.alpha_P, h_of(species, c->P) + c->V, "quasi-Fermi level (P)");
            }
        });
    }
    // compatibility on contacts carrying both species
    if (map.alpha_N && map.alpha_P) {
        for (int axis = 0; axis < mesh.dim(); ++axis)
            for (int side = 0; side < 2; ++side)
                for (const auto& c : map.contact[axis][side]) {
                    if (!c || !(c->N > 0.0 && c->P > 0.0)) continue;
                    const double lhs = h_of(species, c->N) + h_of(species, c->P);
                    if (std::abs(lhs - (*map.alpha_N + *map.alpha_P)) > 1e-10)
                        throw std::invalid_argument(
                            "dd boundary: contact violates the compatibility condition");
                }
    }
    return map;
}

struct DDState {
    std::vector<double> N, P, V;
    double time = 0.0;
};

struct ThermalEquilibrium {
    std::vector<double> N, P, V;
    double alpha_N = 0.0, alpha_P = 0.0;
    int newton_iterations = 0;
};

namespace detail {

/// (A x)_i for the SPD operator A = -discrete Laplacian (two-point flux,
/// Dirichlet via half-cell ghost distance, Neumann via zero face flux),
/// plus an optional extra nonnegative diagonal.
inline void neg_laplacian_apply(const MeshND& mesh, const DDBoundaryMap& bmap,
                                std::span<const double> extra_diag, std::span<const double> x,
                                std::span<double> out) {
    for (auto& v : out) v = 0.0;
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        for_each_line(mesh, axis, [&](std::size_t line, auto flat_of) {
            const auto idx0 = mesh.multi_index(flat_of(0));
            const double meas = mesh.transverse_measure(axis, idx0);
            for (int k = 1; k < n; ++k) {
                const double c = meas / ax.interface_distances[k];
                const double d = x[flat_of(k)] - x[flat_of(k - 1)];
                out[flat_of(k)] += c * d;
                out[flat_of(k - 1)] -= c * d;
            }
            if (bmap.contact[axis][0][line])
                out[flat_of(0)] += meas / ax.interface_distances[0] * x[flat_of(0)];
            if (bmap.contact[axis][1][line])
                out[flat_of(n - 1)] += meas / ax.interface_distances[n] * x[flat_of(n - 1)];
        });
    }
    if (!extra_diag.empty())
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += extra_diag[i] * x[i];
}

/// Dirichlet data contribution to the right-hand side of A V = b.
inline void dirichlet_rhs(const MeshND& mesh, const DDBoundaryMap& bmap, std::span<double> b) {
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        for_each_line(mesh, axis, [&](std::size_t line, auto flat_of) {
            const auto idx0 = mesh.multi_index(flat_of(0));
            const double meas = mesh.transverse_measure(axis, idx0);
            if (const auto& c = bmap.contact[axis][0][line])
                b[flat_of(0)] += meas / ax.interface_distances[0] * c->V;
            if (const auto& c = bmap.contact[axis][1][line])
                b[flat_of(n - 1)] += meas / ax.interface_distances[n] * c->V;
        });
    }
}

inline std::vector<double> thomas_solve(std::vector<double> sub, std::vector<double> diag,
                                        std::vector<double> sup, std::vector<double> rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

/// Solve A x = b for the 1D operator by direct tridiagonal elimination.
inline std::vector<double> solve_spd_1d(const MeshND& mesh, const DDBoundaryMap& bmap,
                                        std::span<const double> extra_diag,
                                        std::span<const double> b) {
    const Mesh1D& ax = mesh.axes[0];
    const int n = ax.n_cells();
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(b.begin(), b.end());
    for (int k = 1; k < n; ++k) {
        const double c = 1.0 / ax.interface_distances[k];
        diag[k] += c;
        diag[k - 1] += c;
        sub[k] -= c;
        sup[k - 1] -= c;
    }
    if (bmap.contact[0][0][0]) diag[0] += 1.0 / ax.interface_distances[0];
    if (bmap.contact[0][1][0]) diag[n - 1] += 1.0 / ax.interface_distances[n];
    if (!extra_diag.empty())
        for (int i = 0; i < n; ++i) diag[i] += extra_diag[i];
    return thomas_solve(std::move(sub), std::move(diag), std::move(sup), std::move(rhs));
}

/// Conjugate gradient on the matrix-free operator, relative residual 1e-12.
inline std::vector<double> solve_spd_cg(const MeshND& mesh, const DDBoundaryMap& bmap,
                                        std::span<const double> extra_diag,
                                        std::span<const double> b) {
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), p = r, Ap(n);
    auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
        return s;
    };
    double rr = dot(r, r);
    const double b2 = std::max(rr, 1e-300);
    const double tol2 = 1e-24 * b2;
    const std::size_t max_iter = 20 * n + 100;
    for (std::size_t it = 0; it < max_iter && rr > tol2; ++it) {
        neg_laplacian_apply(mesh, bmap, extra_diag, p, Ap);
        const double alpha = rr / dot(p, Ap);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    if (rr > tol2) throw std::runtime_error("dd poisson: conjugate gradient did not converge");
    return x;
}

inline std::vector<double> solve_spd(const MeshND& mesh, const DDBoundaryMap& bmap,
                                     std::span<const double> extra_diag,
                                     std::span<const double> b) {
    return mesh.dim() == 1 ? solve_spd_1d(mesh, bmap, extra_diag, b)
                           : solve_spd_cg(mesh, bmap, extra_diag, b);
}

}  // namespace detail

/// Electrostatic potential from Delta V = N - P - C with the map's contact
/// (Dirichlet) and insulating (Neumann) faces.
inline std::vector<double> poisson_solve(std::span<const double> N, std::span<const double> P,
                                         std::span<const double> doping, const DDBoundaryMap& bmap,
                                         const MeshND& mesh) {
    if (!bmap.has_contact())
        throw std::invalid_argument("poisson_solve: all-insulating boundary is singular");
    const std::size_t nc = mesh.cell_count();
    if (N.size() != nc || P.size() != nc || doping.size() != nc)
        throw std::invalid_argument("poisson_solve: shape mismatch");
    std::vector<double> b(nc, 0.0);
    for (std::size_t i = 0; i < nc; ++i)
        b[i] = -(N[i] - P[i] - doping[i]) * mesh.cell_volume(i);
    detail::dirichlet_rhs(mesh, bmap, b);
    return detail::solve_spd(mesh, bmap, {}, b);
}

/// Thermal equilibrium (N^eq, P^eq, V^eq) by a damped Newton iteration on
/// the nonlinear Poisson equation
///   Delta V = g(alpha_N + V) - g(alpha_P - V) - C.
inline ThermalEquilibrium thermal_equilibrium(std::span<const double> doping,
                                              const DDBoundaryMap& bmap, const MeshND& mesh,
                                              double gamma) {
    if (!bmap.has_contact())
        throw std::invalid_argument("thermal_equilibrium: at least one contact required");
    if (!bmap.alpha_N || !bmap.alpha_P)
        throw std::invalid_argument(
            "thermal_equilibrium: contacts do not determine both quasi-Fermi levels");
    const double aN = *bmap.alpha_N, aP = *bmap.alpha_P;
    const std::size_t nc = mesh.cell_count();
    if (doping.size() != nc) throw std::invalid_argument("thermal_equilibrium: shape mismatch");

    std::vector<double> V(nc, 0.0), R(nc), AV(nc), extra(nc), rhs(nc), b0(nc, 0.0);
    detail::dirichlet_rhs(mesh, bmap, b0);

    auto residual = [&](const std::vector<double>& v, std::vector<double>& out) {
        detail::neg_laplacian_apply(mesh, bmap, {}, v, out);
        double norm = 0.0;
        for (std::size_t i = 0; i < nc; ++i) {
            out[i] += -b0[i] + mesh.cell_volume(i) *
                                   (g_of(gamma, aN + v[i]) - g_of(gamma, aP - v[i]) - doping[i]);
            norm = std::max(norm, std::abs(out[i]));
        }
        return norm;
    };

    double rnorm = residual(V, R);
    int iter = 0;
    for (; iter < 100; ++iter) {
        if (rnorm < 1e-13) break;
        for (std::size_t i = 0; i < nc; ++i) {
            extra[i] =
                mesh.cell_volume(i) * (g_prime(gamma, aN + V[i]) + g_prime(gamma, aP - V[i]));
            rhs[i] = -R[i];
        }
        std::vector<double> delta = detail::solve_spd(mesh, bmap, extra, rhs);
        double dmax = 0.0;
        for (double d : delta) dmax = std::max(dmax, std::abs(d));

        // damped update: halve the step while the residual grows
        double lambda = 1.0;
        std::vector<double> trial(nc), Rtrial(nc);
        double rtrial = 0.0;
        int halvings = 0;
        for (; halvings <= 30; ++halvings) {
            for (std::size_t i = 0; i < nc; ++i) trial[i] = V[i] + lambda * delta[i];
            rtrial = residual(trial, Rtrial);
            if (rtrial <= rnorm || rnorm < 1e-13) break;
            lambda *= 0.5;
        }
        if (halvings > 30)
            throw std::runtime_error(
                "thermal_equilibrium: Newton stalled, last residual " + std::to_string(rnorm));
        V.swap(trial);
        R.swap(Rtrial);
        rnorm = rtrial;
        if (lambda * dmax < 1e-10) break;
    }
    if (rnorm >= 1e-13 && iter == 100)
        throw std::runtime_error("thermal_equilibrium: no convergence in 100 iterations, residual " +
                                 std::to_string(rnorm));

    ThermalEquilibrium eq;
    eq.V = std::move(V);
    eq.N.resize(nc);
    eq.P.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        eq.N[i] = g_of(gamma, aN + eq.V[i]);
        eq.P[i] = g_of(gamma, aP - eq.V[i]);
    }
    eq.alpha_N = aN;
    eq.alpha_P = aP;
    eq.newton_iterations = iter;
    return eq;
}

namespace detail {

/// One species' semi-discrete rhs given the cell potential V. `sign` is the
/// drift sign of the species in its effective potential W = sign * V
/// (electrons: -1, holes: +1). Also accumulates the dissipation sum when
/// `dissipation` is non-null.
inline void dd_species_rhs(std::span<const double> u, std::span<const double> V,
                           bool species_is_electron, const ProblemModel& model,
                           const MeshND& mesh, const DDBoundaryMap& bmap,
                           const FluxScheme& scheme, std::span<double> rhs,
                           double* dissipation = nullptr) {
    const double sign = species_is_electron ? -1.0 : 1.0;
    const Limiter lim = scheme.kind == FluxKind::fu2 ? scheme.limiter : Limiter::none;
    for (auto& v : rhs) v = 0.0;
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        std::vector<double> ug(static_cast<std::size_t>(n) + 4);
        std::vector<double> dv(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<double> flux(static_cast<std::size_t>(n) + 1);
        for_each_line(mesh, axis, [&](std::size_t line, auto flat_of) {
            const auto& cl = bmap.contact[axis][0][line];
            const auto& cr = bmap.contact[axis][1][line];
            AxisBc ab;
            ab.left = cl ? BcSide::dirichlet(species_is_electron ? cl->N : cl->P)
                         : BcSide::neumann();
            ab.right = cr ? BcSide::dirichlet(species_is_electron ? cr->N : cr->P)
                          : BcSide::neumann();
            for (int j = 0; j < n; ++j) ug[j + 2] = u[flat_of(j)];
            fill_ghosts(ug, ab);
            for (int k = 1; k < n; ++k)
                dv[k] = sign * (V[flat_of(k)] - V[flat_of(k - 1)]) / ax.interface_distances[k];
            if (cl) dv[0] = sign * (V[flat_of(0)] - cl->V) / ax.interface_distances[0];
            if (cr) dv[n] = sign * (cr->V - V[flat_of(n - 1)]) / ax.interface_distances[n];

            const auto idx0 = mesh.multi_index(flat_of(0));
            const double meas = mesh.transverse_measure(axis, idx0);
            for (int k = 0; k <= n; ++k) {
                const bool boundary = (k == 0 || k == n);
                const bool insulating = (k == 0 && !cl) || (k == n && !cr);
                if (insulating) {
                    flux[k] = 0.0;
                    continue;
                }
                const InterfaceStencil s{ug[k], ug[k + 1], ug[k + 2], ug[k + 3], dv[k],
                                         ax.interface_distances[k]};
                flux[k] = interface_flux(model, scheme, s);
                if (dissipation && !boundary) {
                    const double a = velocity(model, s);
                    const auto [um, up] = reconstruct(s, lim);
                    *dissipation += meas * s.dist * a * a * std::min(um, up);
                }
            }
            for (int j = 0; j < n; ++j)
                rhs[flat_of(j)] -= (flux[j + 1] - flux[j]) / ax.widths[j];
        });
    }
}

}  // namespace detail

/// One explicit step of the coupled system with lagged coupling: both
/// densities advance with the current V, then V is refreshed by a Poisson
/// solve from the new densities.
inline DDState dd_step(const DDState& state, double gamma, const DDBoundaryMap& bmap,
                       const MeshND& mesh, std::span<const double> doping,
                       const FluxScheme& scheme, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("dd_step: dt must be > 0");
    const std::size_t nc = mesh.cell_count();
    if (state.N.size() != nc || state.P.size() != nc)
        throw std::invalid_argument("dd_step: state/mesh size mismatch");
    const ProblemModel mN = dd_continuity(gamma, -1), mP = dd_continuity(gamma, +1);
    // a state without a potential (fresh initial data) gets one consistently
    std::vector<double> v_fresh;
    if (state.V.size() != nc) v_fresh = poisson_solve(state.N, state.P, doping, bmap, mesh);
    const std::vector<double>& V = state.V.size() == nc ? state.V : v_fresh;
    std::vector<double> rhsN(nc), rhsP(nc);
    detail::dd_species_rhs(state.N, V, true, mN, mesh, bmap, scheme, rhsN);
    detail::dd_species_rhs(state.P, V, false, mP, mesh, bmap, scheme, rhsP);
    DDState next;
    next.N.resize(nc);
    next.P.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        next.N[i] = state.N[i] + dt * rhsN[i];
        next.P[i] = state.P[i] + dt * rhsP[i];
        if (!std::isfinite(next.N[i]) || !std::isfinite(next.P[i]) || next.N[i] < -1e-10 ||
            next.P[i] < -1e-10)
            throw std::runtime_error("dd_step: invalid density at cell " + std::to_string(i));
    }
    next.V = poisson_solve(next.N, next.P, doping, bmap, mesh);
    next.time = state.time + dt;
    return next;
}

/// Relative energy: Bregman entropy of both densities against the thermal
/// equilibrium plus the discrete H1 seminorm of V - V^eq over non-insulating
/// faces (Dirichlet data cancels in the difference).
inline double dd_relative_energy(const DDState& state, const ThermalEquilibrium& eq, double gamma,
                                 const MeshND& mesh, const DDBoundaryMap& bmap) {
    const ProblemModel species = dd_continuity(gamma, -1);
    const std::size_t nc = mesh.cell_count();
    double e = 0.0;
    auto bregman = [&](std::span<const double> u, std::span<const double> ue) {
        double s = 0.0;
        for (std::size_t i = 0; i < nc; ++i) {
            double hq;
            if (ue[i] <= 0.0 && species.h_singular_lo)
                hq = h_of(species, 1e-30);
            else
                hq = h_of(species, ue[i]);
            s += mesh.cell_volume(i) *
                 (species.H(u[i]) - species.H(ue[i]) - hq * (u[i] - ue[i]));
        }
        return s;
    };
    e += bregman(state.N, eq.N);
    e += bregman(state.P, eq.P);

    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        detail::for_each_line(mesh, axis, [&](std::size_t line, auto flat_of) {
            const auto idx0 = mesh.multi_index(flat_of(0));
            const double meas = mesh.transverse_measure(axis, idx0);
            for (int k = 1; k < n; ++k) {
                const double d = (state.V[flat_of(k)] - eq.V[flat_of(k)]) -
                                 (state.V[flat_of(k - 1)] - eq.V[flat_of(k - 1)]);
                e += 0.5 * meas / ax.interface_distances[k] * d * d;
            }
            if (bmap.contact[axis][0][line]) {
                const double d = state.V[flat_of(0)] - eq.V[flat_of(0)];
                e += 0.5 * meas / ax.interface_distances[0] * d * d;
            }
            if (bmap.contact[axis][1][line]) {
                const double d = state.V[flat_of(n - 1)] - eq.V[flat_of(n - 1)];
                e += 0.5 * meas / ax.interface_distances[n] * d * d;
            }
        });
    }
    return e;
}

/// Entropy dissipation of the coupled system: the two species' interior-face
/// sums with their effective potentials.
inline double dd_dissipation(const DDState& state, double gamma, const MeshND& mesh,
                             const DDBoundaryMap& bmap, const FluxScheme& scheme) {
    const std::size_t nc = mesh.cell_count();
    const ProblemModel mN = dd_continuity(gamma, -1), mP = dd_continuity(gamma, +1);
    std::vector<double> scratch(nc);
    double diss = 0.0;
    detail::dd_species_rhs(state.N, state.V, true, mN, mesh, bmap, scheme, scratch, &diss);
    detail::dd_species_rhs(state.P, state.V, false, mP, mesh, bmap, scheme, scratch, &diss);
    return diss;
}

struct DDRecord {
    double time = 0.0;
    double mass_N = 0.0, mass_P = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double l1_to_equilibrium = 0.0;
};

struct DDRunResult {
    DDState final_state;
    std::vector<DDRecord> records;
};

/// Advance the coupled system to t_final, recording the relative energy and
/// dissipation every record_every steps.
inline DDRunResult dd_run(DDState initial, double gamma, const DDBoundaryMap& bmap,
                          const MeshND& mesh, std::span<const double> doping,
                          const FluxScheme& scheme, double dt, double t_final,
                          long record_every, const ThermalEquilibrium* eq = nullptr) {
    if (record_every < 1) throw std::invalid_argument("dd_run: record_every must be >= 1");
    DDRunResult result;
    DDState state = std::move(initial);
    if (state.V.empty()) state.V = poisson_solve(state.N, state.P, doping, bmap, mesh);

    auto record = [&](const DDState& st) {
        DDRecord rec;
        rec.time = st.time;
        rec.mass_N = total_mass(st.N, mesh);
        rec.mass_P = total_mass(st.P, mesh);
        rec.dissipation = dd_dissipation(st, gamma, mesh, bmap, scheme);
        if (eq) {
            rec.energy = dd_relative_energy(st, *eq, gamma, mesh, bmap);
            double l1 = 0.0;
            for (std::size_t i = 0; i < mesh.cell_count(); ++i)
                l1 += mesh.cell_volume(i) *
                      (std::abs(st.N[i] - eq->N[i]) + std::abs(st.P[i] - eq->P[i]));
            rec.l1_to_equilibrium = l1;
        }
        result.records.push_back(rec);
    };

    record(state);
    const double eps_t = 1e-12 * std::max(1.0, t_final);
    long step = 0;
    while (state.time < t_final - eps_t) {
        const double step_dt = std::min(dt, t_final - state.time);
        state = dd_step(state, gamma, bmap, mesh, doping, scheme, step_dt);
        ++step;
        if (step % record_every == 0 || state.time >= t_final - eps_t) record(state);
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace fvdp
