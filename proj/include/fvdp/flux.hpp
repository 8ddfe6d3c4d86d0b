#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "fvdp/model.hpp"

namespace fvdp {

enum class FluxKind { fu1, fu2, cu, sgext };
enum class Limiter { none, van_leer };

struct FluxScheme {
    FluxKind kind = FluxKind::fu2;
    Limiter limiter = Limiter::van_leer;

    static FluxScheme fu1() { return {FluxKind::fu1, Limiter::none}; }
    static FluxScheme fu2() { return {FluxKind::fu2, Limiter::van_leer}; }
    static FluxScheme cu() { return {FluxKind::cu, Limiter::none}; }
    static FluxScheme sgext() { return {FluxKind::sgext, Limiter::none}; }

    void validate() const {
        if (kind == FluxKind::fu2 && limiter != Limiter::van_leer)
            throw std::invalid_argument("flux: FU2 requires the van Leer limiter");
        if (kind != FluxKind::fu2 && limiter != Limiter::none)
            throw std::invalid_argument("flux: only FU2 carries a limiter");
    }
};

inline const char* flux_name(FluxKind k) {
    switch (k) {
        case FluxKind::fu1: return "fu1";
        case FluxKind::fu2: return "fu2";
        case FluxKind::cu: return "cu";
        case FluxKind::sgext: return "sgext";
    }
    return "?";
}

/// The four cell averages straddling one interface (ghost-filled at
/// boundaries), the centered potential difference quotient and the
/// center-to-center distance across the interface.
struct InterfaceStencil {
    double u_mm, u_m, u_p, u_pp;
    double dv;
    double dist;
};

/// Van Leer limiter phi(theta) = (theta + |theta|) / (1 + |theta|)
inline double van_leer(double theta) {
    if (theta <= 0.0) return 0.0;
    return 2.0 * theta / (1.0 + theta);
}

namespace detail {

inline double stencil_scale(const InterfaceStencil& s) {
    return std::max({1.0, std::abs(s.u_mm), std::abs(s.u_m), std::abs(s.u_p), std::abs(s.u_pp)});
}

// half-slope phi(theta)*(num_d) with the degenerate-denominator rule: when
// |den| falls below 1e-14 * stencil scale the whole term is dropped
inline double limited_halfslope(double num, double den, double scale) {
    if (std::abs(den) < 1e-14 * scale) return 0.0;
    return van_leer(num / den) * den;
}

// clamp for enthalpy evaluation at a singular end of the admissible range
inline double velocity_arg(const ProblemModel& m, double u) {
    double v = u;
    if (m.h_singular_lo) v = std::max(v, m.lo + m.h_clamp);
    if (m.h_singular_hi) v = std::min(v, m.hi - m.h_clamp);
    return v;
}

}  // namespace detail

/// MUSCL traces (u_minus, u_plus) at the interface
inline std::pair<double, double> reconstruct(const InterfaceStencil& s,
                                             Limiter limiter = Limiter::van_leer) {
    if (limiter == Limiter::none) return {s.u_m, s.u_p};
    const double scale = detail::stencil_scale(s);
    const double u_minus =
        s.u_m + 0.5 * detail::limited_halfslope(s.u_m - s.u_mm, s.u_p - s.u_m, scale);
    const double u_plus =
        s.u_p - 0.5 * detail::limited_halfslope(s.u_p - s.u_m, s.u_pp - s.u_p, scale);
    return {u_minus, u_plus};
}

/// Interface velocity A = -dV - d htilde(U), the discrete -(V + htilde(u))_x
inline double velocity(const ProblemModel& model, const InterfaceStencil& s) {
    const double hm = htilde_of(model, detail::velocity_arg(model, s.u_m));
    const double hp = htilde_of(model, detail::velocity_arg(model, s.u_p));
    return -s.dv - (hp - hm) / s.dist;
}

inline double flux_fu1(const ProblemModel& model, const InterfaceStencil& s) {
    const double a = velocity(model, s);
    const double alpha = alpha_bound(model, s.u_m, s.u_p);
    return 0.5 * a * (model.f(s.u_m) + model.f(s.u_p)) -
           0.5 * std::abs(a) * alpha * (s.u_p - s.u_m);
}

/// Second-order fully upwind flux; A and alpha are evaluated on the cell
/// averages, the Lax-Friedrichs form on the reconstructed traces.
inline double flux_fu2(const ProblemModel& model, const InterfaceStencil& s,
                       Limiter limiter = Limiter::van_leer) {
    const double a = velocity(model, s);
    const double alpha = alpha_bound(model, s.u_m, s.u_p);
    const auto [um, up] = reconstruct(s, limiter);
    return 0.5 * a * (model.f(um) + model.f(up)) - 0.5 * std::abs(a) * alpha * (up - um);
}

/// Classical upwind flux: upwinded convection plus two-point diffusion.
/// Linear convection only.
inline double flux_cu(const ProblemModel& model, const InterfaceStencil& s) {
    if (!model.linear_convection)
        throw std::invalid_argument("flux_cu: requires linear convection (f = id)");
    const double w = -s.dv;
    const double wplus = std::max(w, 0.0), wminus = std::max(-w, 0.0);
    return wplus * s.u_m - wminus * s.u_p - (model.r(s.u_p) - model.r(s.u_m)) / s.dist;
}

/// B(x) = x / (e^x - 1), B(0) = 1, with a Taylor guard near 0
inline double bernoulli(double x) {
    if (std::abs(x) <= 1e-8) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
}

/// Nonlinear-diffusion mean dr(a,b) of the Scharfetter-Gummel extension
inline double dr_mean(const ProblemModel& model, double a, double b) {
    if (a * b > 0.0 && std::abs(a - b) > 1e-14 * std::max(a, b))
        return (h_of(model, b) - h_of(model, a)) / (std::log(b) - std::log(a));
    return model.r_prime(0.5 * (a + b));
}

/// Scharfetter-Gummel flux extended to nonlinear diffusion. Linear
/// convection only. Fully degenerate interfaces (dr = 0) fall back to pure
/// upwind convection, the dr -> 0+ limit of the Bernoulli form.
inline double flux_sgext(const ProblemModel& model, const InterfaceStencil& s) {
    if (!model.linear_convection)
        throw std::invalid_argument("flux_sgext: requires linear convection (f = id)");
    const double dr = dr_mean(model, s.u_m, s.u_p);
    if (dr == 0.0) {
        const double w = -s.dv;
        return std::max(w, 0.0) * s.u_m - std::max(-w, 0.0) * s.u_p;
    }
    const double x = s.dist * s.dv / dr;
    return dr / s.dist * (bernoulli(x) * s.u_m - bernoulli(-x) * s.u_p);
}

inline double interface_flux(const ProblemModel& model, const FluxScheme& scheme,
                             const InterfaceStencil& s) {
    switch (scheme.kind) {
        case FluxKind::fu1: return flux_fu1(model, s);
        case FluxKind::fu2: return flux_fu2(model, s, scheme.limiter);
        case FluxKind::cu: return flux_cu(model, s);
        case FluxKind::sgext: return flux_sgext(model, s);
    }
    return 0.0;
}

}  // namespace fvdp
