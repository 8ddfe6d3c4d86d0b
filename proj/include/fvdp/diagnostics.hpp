#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fvdp/boundary.hpp"
#include "fvdp/detail/sweep.hpp"
#include "fvdp/flux.hpp"
#include "fvdp/mesh.hpp"
#include "fvdp/model.hpp"
#include "fvdp/potential.hpp"

namespace fvdp {

struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;
    double entropy = 0.0;
    double dissipation = 0.0;
    double l1_to_equilibrium = 0.0;
};

/// Discrete relative entropy (Bregman divergence of H at the equilibrium):
///   sum_i m(K_i) [H(U_i) - H(U_i^eq) - h(U_i^eq)(U_i - U_i^eq)].
/// Cells where U^eq = 0 and h diverges at 0 use h evaluated at 1e-30 and are
/// counted in *degenerate_cells when given.
inline double discrete_entropy(std::span<const double> values, std::span<const double> equilibrium,
                               const ProblemModel& model, const MeshND& mesh,
                               std::size_t* degenerate_cells = nullptr) {
    if (values.size() != equilibrium.size() || values.size() != mesh.cell_count())
        throw std::invalid_argument("discrete_entropy: shape mismatch");
    const bool singular0 = model.h_singular_lo;
    std::size_t degen = 0;
    double e = 0.0;
    for (std::size_t c = 0; c < values.size(); ++c) {
        const double u = values[c], ue = equilibrium[c];
        double heq;
        if (ue <= 0.0 && singular0) {
            heq = htilde_of(model, 1e-30);
            ++degen;
        } else {
            heq = htilde_of(model, ue);
        }
        e += mesh.cell_volume(c) * (model.H(u) - model.H(ue) - heq * (u - ue));
    }
    if (degenerate_cells) *degenerate_cells = degen;
    return e;
}

/// Discrete entropy dissipation
///   sum_faces dist * |A|^2 * min(u_minus, u_plus),
/// with reconstructed traces for FU2 and cell averages otherwise. Zero-flux
/// boundary faces contribute nothing.
inline double discrete_dissipation(std::span<const double> values, const ProblemModel& model,
                                   const MeshND& mesh, const BoundaryCondition& bc,
                                   const FluxScheme& scheme) {
    bc.validate(mesh.dim());
    const Limiter lim = scheme.kind == FluxKind::fu2 ? scheme.limiter : Limiter::none;
    const auto dv_axes = potential_gradients(model, mesh, bc);

    double total = 0.0;
    for (int axis = 0; axis < mesh.dim(); ++axis) {
        const Mesh1D& ax = mesh.axes[axis];
        const int n = ax.n_cells();
        const AxisBc& ab = bc.axes[axis];
        const auto dist = detail::axis_distances(ax, ab.periodic());
        const auto& dv = dv_axes[axis];
        std::vector<double> ug(static_cast<std::size_t>(n) + 4);

        detail::for_each_line(mesh, axis, [&](std::size_t, auto flat_of) {
            for (int j = 0; j < n; ++j) ug[j + 2] = values[flat_of(j)];
            detail::fill_ghosts(ug, ab);
            double trans = 1.0;
            {
                const auto idx = mesh.multi_index(flat_of(0));
                trans = mesh.transverse_measure(axis, idx);
            }
            const int k_hi = ab.periodic() ? n - 1 : n;  // wrap face counted once
            for (int k = 0; k <= k_hi; ++k) {
                const bool boundary = (k == 0 || k == n);
                if (boundary) {
                    const BcSide& side = k == 0 ? ab.left : ab.right;
                    if (side.kind == BcKind::neumann_zero_flux) continue;
                }
                const InterfaceStencil s{ug[k], ug[k + 1], ug[k + 2], ug[k + 3], dv[k], dist[k]};
                const double a = velocity(model, s);
                const auto [um, up] = reconstruct(s, lim);
                total += trans * dist[k] * a * a * std::min(um, up);
            }
        });
    }
    return total;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b,
                          const MeshND& mesh) {
    if (a.size() != b.size() || a.size() != mesh.cell_count())
        throw std::invalid_argument("l1_distance: shape mismatch");
    double d = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) d += mesh.cell_volume(c) * std::abs(a[c] - b[c]);
    return d;
}

struct DecayFit {
    double rate = 0.0;      // lambda > 0 means exponential decay
    double residual = 0.0;  // RMS of the log-linear fit
    std::size_t points = 0;
};

/// Least-squares slope of log(value) against time over [t0, t1],
/// sign-flipped so that decay comes out positive.
inline DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                               double t0, double t1) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay_rate: shape mismatch");
    std::vector<double> t, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || times[i] > t1) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_decay_rate: nonpositive value in window");
        t.push_back(times[i]);
        y.push_back(std::log(values[i]));
    }
    if (t.size() < 5) throw std::invalid_argument("fit_decay_rate: fewer than 5 points in window");

    const double np = static_cast<double>(t.size());
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / np, my = sy / np;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxx += (t[i] - mt) * (t[i] - mt);
        sxy += (t[i] - mt) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate time window");
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double rhat = my + slope * (t[i] - mt);
        ss += (y[i] - rhat) * (y[i] - rhat);
    }
    return {-slope, std::sqrt(ss / np), t.size()};
}

/// Default fit window: the middle half of the series, clipped where the
/// values fall below 100 ulp of the initial value (floor saturation).
inline std::pair<double, double> default_fit_window(std::span<const double> times,
                                                    std::span<const double> values) {
    if (times.empty()) throw std::invalid_argument("default_fit_window: empty series");
    const double v0 = values.front();
    const double floor = 100.0 * (std::nextafter(v0, std::numeric_limits<double>::infinity()) - v0);
    double t_lo = times.front() + 0.25 * (times.back() - times.front());
    double t_hi = times.front() + 0.75 * (times.back() - times.front());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] < floor) {
            t_hi = std::min(t_hi, times[i]);
            break;
        }
    }
    return {t_lo, t_hi};
}

}  // namespace fvdp
