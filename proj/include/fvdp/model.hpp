#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace fvdp {

using ScalarFn = std::function<double(double)>;

struct ModelParams {
    double m = 0.0;        // porous media exponent
    double gamma = 0.0;    // drift-diffusion pressure exponent
    int k = 0;             // +1 boson, -1 fermion
    double epsilon = 0.0;  // capillary diffusion scale
    double dv = 0.0;       // constant potential gradient, when applicable
};

/// One instance of du/dt = div(f(u) grad V + grad r(u)).
///
/// h is the enthalpy h(s) = int_1^s r'(t)/t dt and htilde satisfies
/// htilde' * f = r' (htilde == h for linear convection). H is the
/// antiderivative of htilde from 0, used by the entropy diagnostics.
struct ProblemModel {
    std::string name;
    ModelParams params;

    ScalarFn f, f_prime;
    ScalarFn r, r_prime;
    ScalarFn h;       // closed form; empty -> quadrature fallback
    ScalarFn htilde;  // closed form; empty -> equals h (linear convection)
    ScalarFn H;       // antiderivative of htilde, H(0) = 0

    // max |f'| over [min(a,b), max(a,b)]; empty -> sampled bound
    std::function<double(double, double)> alpha_max;

    // potential at a point (up to 3 coordinates)
    std::function<double(std::span<const double>)> V_at;
    // when set, dV at every interface is this constant (1D presets)
    std::optional<double> dv_constant;

    bool linear_convection = true;

    // admissible range of u
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    // htilde diverges at the respective end of the range; velocity
    // evaluations clamp a distance h_clamp inside
    bool h_singular_lo = false;
    bool h_singular_hi = false;
    double h_clamp = 1e-12;

    double h_at_zero() const { return h ? h(0.0) : -std::numeric_limits<double>::infinity(); }
};

namespace detail {

// adaptive Simpson refinement
inline double adapt_simpson(const ScalarFn& g, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = g(lm), frm = g(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const ScalarFn& g, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = g(a), fm = g(m), fb = g(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adapt_simpson(g, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// Quadrature fallback for h: integrates r'(t)/t from 1 to s to 1e-10
/// absolute tolerance, with the singular lower endpoint cut off at 1e-14.
inline double h_quadrature(const ProblemModel& model, double s) {
    const double cutoff = 1e-14;
    const double target = std::max(s, cutoff);
    const ScalarFn integrand = [&model](double t) { return model.r_prime(t) / t; };
    return detail::integrate(integrand, 1.0, target, 1e-10);
}

inline double h_of(const ProblemModel& model, double s) {
    if (s < 0.0) throw std::domain_error("h_of: negative argument");
    if (model.h) {
        const double v = model.h(s);
        if (s == 0.0 && !std::isfinite(v))
            throw std::domain_error("h_of: h diverges at 0 for model " + model.name);
        return v;
    }
    return h_quadrature(model, s);
}

inline double htilde_of(const ProblemModel& model, double s) {
    if (model.htilde) return model.htilde(s);
    return h_of(model, s);
}

/// max |f'(u)| over all u between a and b
inline double alpha_bound(const ProblemModel& model, double a, double b) {
    if (model.alpha_max) return model.alpha_max(a, b);
    const double lo = std::min(a, b), hi = std::max(a, b);
    double best = 0.0;
    constexpr int samples = 33;
    for (int i = 0; i < samples; ++i) {
        const double u = lo + (hi - lo) * i / (samples - 1);
        best = std::max(best, std::abs(model.f_prime(u)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// catalog

/// u_t = div(x u + grad u^m), m > 1 (Barenblatt steady states)
inline ProblemModel porous_media(double m) {
    if (!(m > 1.0)) throw std::invalid_argument("porous_media: require m > 1");
    ProblemModel mod;
    mod.name = "porous_media";
    mod.params.m = m;
    mod.f = [](double u) { return u; };
    mod.f_prime = [](double) { return 1.0; };
    mod.alpha_max = [](double, double) { return 1.0; };
    mod.r = [m](double s) { return std::pow(s, m); };
    mod.r_prime = [m](double s) { return m * std::pow(s, m - 1.0); };
    mod.h = [m](double s) { return m / (m - 1.0) * (std::pow(s, m - 1.0) - 1.0); };
    mod.H = [m](double s) { return (std::pow(s, m) - m * s) / (m - 1.0); };
    mod.V_at = [](std::span<const double> x) {
        double v = 0.0;
        for (double c : x) v += 0.5 * c * c;
        return v;
    };
    return mod;
}

/// Fokker-Planck relaxation of fermion (k = -1) or boson (k = +1) gases:
/// u_t = div(x u(1+ku) + grad u)
inline ProblemModel fokker_planck(int k) {
    if (k != 1 && k != -1) throw std::invalid_argument("fokker_planck: require k = +1 or -1");
    ProblemModel mod;
    mod.name = "fokker_planck";
    mod.params.k = k;
    const double kd = static_cast<double>(k);
    mod.f = [kd](double u) { return u * (1.0 + kd * u); };
    mod.f_prime = [kd](double u) { return 1.0 + 2.0 * kd * u; };
    // f' is linear in u, so |f'| peaks at an endpoint
    mod.alpha_max = [kd](double a, double b) {
        return std::max(std::abs(1.0 + 2.0 * kd * a), std::abs(1.0 + 2.0 * kd * b));
    };
    mod.r = [](double s) { return s; };
    mod.r_prime = [](double) { return 1.0; };
    mod.h = [](double s) { return std::log(s); };
    mod.htilde = [kd](double s) { return std::log(s / (1.0 + kd * s)); };
    // H(s) = s log s - (1/k)(1+ks) log(1+ks), with the s log s -> 0 limit
    mod.H = [kd](double s) {
        const double a = s > 0.0 ? s * std::log(s) : 0.0;
        const double q = 1.0 + kd * s;
        const double b = q > 0.0 ? q * std::log(q) / kd : 0.0;
        return a - b;
    };
    mod.V_at = [](std::span<const double> x) {
        double v = 0.0;
        for (double c : x) v += 0.5 * c * c;
        return v;
    };
    mod.linear_convection = false;
    mod.lo = 0.0;
    mod.hi = k < 0 ? 1.0 : std::numeric_limits<double>::infinity();
    mod.h_singular_lo = true;
    mod.h_singular_hi = (k < 0);
    return mod;
}

/// u_t = d/dx(u dV + d/dx r(u)) with constant dV and power-law r(s) = s^p
inline ProblemModel linear_drift_power_diffusion(double exponent, double dv) {
    if (!(exponent > 1.0))
        throw std::invalid_argument("linear_drift_power_diffusion: require exponent > 1");
    ProblemModel mod;
    mod.name = "linear_drift_power_diffusion";
    mod.params.gamma = exponent;
    mod.params.dv = dv;
    const double p = exponent;
    mod.f = [](double u) { return u; };
    mod.f_prime = [](double) { return 1.0; };
    mod.alpha_max = [](double, double) { return 1.0; };
    if (p == 2.0) {  // hot path for the quadratic pressure law
        mod.r = [](double s) { return s * s; };
        mod.r_prime = [](double s) { return 2.0 * s; };
        mod.h = [](double s) { return 2.0 * (s - 1.0); };
        mod.H = [](double s) { return s * s - 2.0 * s; };
    } else {
        mod.r = [p](double s) { return std::pow(s, p); };
        mod.r_prime = [p](double s) { return p * std::pow(s, p - 1.0); };
        mod.h = [p](double s) { return p / (p - 1.0) * (std::pow(s, p - 1.0) - 1.0); };
        mod.H = [p](double s) { return (std::pow(s, p) - p * s) / (p - 1.0); };
    }
    mod.V_at = [dv](std::span<const double> x) { return dv * x[0]; };
    mod.dv_constant = dv;
    return mod;
}

/// Constant-drift model with user-supplied diffusion nonlinearity.
inline ProblemModel linear_drift_custom_diffusion(ScalarFn r, ScalarFn r_prime, ScalarFn h,
                                                  ScalarFn H, double dv,
                                                  std::string name = "linear_drift_custom") {
    ProblemModel mod;
    mod.name = std::move(name);
    mod.params.dv = dv;
    mod.f = [](double u) { return u; };
    mod.f_prime = [](double) { return 1.0; };
    mod.alpha_max = [](double, double) { return 1.0; };
    mod.r = std::move(r);
    mod.r_prime = std::move(r_prime);
    mod.h = std::move(h);
    mod.H = std::move(H);
    mod.V_at = [dv](std::span<const double> x) { return dv * x[0]; };
    mod.dv_constant = dv;
    return mod;
}

/// r(s) = (s-1)^3 for s >= 1, 0 elsewhere: diffusion degenerate on the whole
/// interval (0,1).
inline ProblemModel linear_drift_piecewise_cubic(double dv) {
    auto r = [](double s) { return s >= 1.0 ? (s - 1.0) * (s - 1.0) * (s - 1.0) : 0.0; };
    auto rp = [](double s) { return s >= 1.0 ? 3.0 * (s - 1.0) * (s - 1.0) : 0.0; };
    // h(s) = 3 (s^2/2 - 2s + log s + 3/2) cancels to O((s-1)^3) at s = 1;
    // the naive form returns sign-indefinite rounding noise for s near 1,
    // which feeds the diffusion mean at degeneracy interfaces. Evaluate in
    // powers of e = s - 1: h = 3 (e^2/2 - e + log1p(e)), with a series
    // branch where even that cancels.
    auto h = [](double s) {
        if (s < 1.0) return 0.0;
        const double e = s - 1.0;
        if (e < 1e-3) return e * e * e * (1.0 - 0.75 * e + 0.6 * e * e - 0.5 * e * e * e);
        return 3.0 * (0.5 * e * e - e + std::log1p(e));
    };
    // H cancels to O((s-1)^4) at s = 1; same treatment,
    // H = 3 ((1+e) log1p(e) - e - e^2/2 + e^3/6)
    auto H = [](double s) {
        if (s < 1.0) return 0.0;
        const double e = s - 1.0;
        if (e < 1e-3) return e * e * e * e * (0.25 - 0.15 * e + 0.1 * e * e);
        return 3.0 * ((1.0 + e) * std::log1p(e) - e - 0.5 * e * e + e * e * e / 6.0);
    };
    auto mod = linear_drift_custom_diffusion(r, rp, h, H, dv, "linear_drift_piecewise_cubic");
    return mod;
}

/// Buckley-Leverett two-phase flow: u_t + d/dx f(u) = eps d/dx(nu(u) u_x)
/// with the s-shaped fractional flow f and nu(u) = 4u(1-u). Written in
/// drift-diffusion form with dV = -1 so that eps = 0 reduces to the local
/// Lax-Friedrichs discretization of the conservation law.
inline ProblemModel buckley_leverett(double eps) {
    if (eps < 0.0) throw std::invalid_argument("buckley_leverett: require eps >= 0");
    ProblemModel mod;
    mod.name = "buckley_leverett";
    mod.params.epsilon = eps;
    mod.f = [](double u) {
        const double w = 1.0 - u;
        return u * u / (u * u + w * w);
    };
    mod.f_prime = [](double u) {
        const double w = 1.0 - u;
        const double g = u * u + w * w;
        return 2.0 * u * w / (g * g);
    };
    // |f'| is unimodal on [0,1] with its peak at u = 1/2
    mod.alpha_max = [](double a, double b) {
        auto fp = [](double u) {
            const double w = 1.0 - u;
            const double g = u * u + w * w;
            return 2.0 * u * w / (g * g);
        };
        const double lo = std::min(a, b), hi = std::max(a, b);
        double best = std::max(std::abs(fp(lo)), std::abs(fp(hi)));
        if (lo < 0.5 && 0.5 < hi) best = std::max(best, fp(0.5));
        return best;
    };
    if (eps == 0.0) {
        mod.r = [](double) { return 0.0; };
        mod.r_prime = [](double) { return 0.0; };
        mod.h = [](double) { return 0.0; };
        mod.htilde = [](double) { return 0.0; };
        mod.H = [](double) { return 0.0; };
    } else {
        mod.r = [eps](double u) { return eps * (2.0 * u * u - 4.0 / 3.0 * u * u * u); };
        mod.r_prime = [eps](double u) { return eps * 4.0 * u * (1.0 - u); };
        mod.htilde = [eps](double u) {
            return eps * 4.0 * (std::log(u) - 3.0 * u + 2.0 * u * u - 2.0 / 3.0 * u * u * u);
        };
        mod.h_singular_lo = true;
        // h (linear-convection enthalpy) left to the quadrature fallback
        mod.H = [eps](double s) {
            const double slogs = s > 0.0 ? s * std::log(s) : 0.0;
            return eps * 4.0 * (slogs - s - 1.5 * s * s + 2.0 / 3.0 * s * s * s - s * s * s * s / 6.0);
        };
    }
    mod.V_at = [](std::span<const double> x) { return -x[0]; };
    mod.dv_constant = -1.0;
    mod.linear_convection = false;
    mod.lo = 0.0;
    mod.hi = 1.0;
    return mod;
}

/// One drift-diffusion continuity equation (pressure r(s) = s^gamma);
/// charge_sign -1 for electrons (drift against V), +1 for holes.
inline ProblemModel dd_continuity(double gamma, int charge_sign) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("dd_continuity: require gamma >= 1");
    if (charge_sign != 1 && charge_sign != -1)
        throw std::invalid_argument("dd_continuity: charge_sign must be +1 or -1");
    ProblemModel mod;
    mod.name = charge_sign < 0 ? "dd_electrons" : "dd_holes";
    mod.params.gamma = gamma;
    mod.params.k = charge_sign;
    mod.f = [](double u) { return u; };
    mod.f_prime = [](double) { return 1.0; };
    mod.alpha_max = [](double, double) { return 1.0; };
    const double g = gamma;
    if (gamma == 2.0) {  // hot path for the quadratic pressure law
        mod.r = [](double s) { return s * s; };
        mod.r_prime = [](double s) { return 2.0 * s; };
        mod.h = [](double s) { return 2.0 * (s - 1.0); };
        mod.H = [](double s) { return s * s - 2.0 * s; };
        mod.V_at = [](std::span<const double>) { return 0.0; };
        return mod;
    }
    mod.r = [g](double s) { return std::pow(s, g); };
    mod.r_prime = [g](double s) { return g * std::pow(s, g - 1.0); };
    if (gamma > 1.0) {
        mod.h = [g](double s) { return g / (g - 1.0) * (std::pow(s, g - 1.0) - 1.0); };
        mod.H = [g](double s) { return (std::pow(s, g) - g * s) / (g - 1.0); };
    } else {
        mod.h = [](double s) { return std::log(s); };
        mod.H = [](double s) { return s > 0.0 ? s * std::log(s) - s : 0.0; };
        mod.h_singular_lo = true;
    }
    // effective potential supplied per-step by the Poisson solve
    mod.V_at = [](std::span<const double>) { return 0.0; };
    return mod;
}

}  // namespace fvdp
