#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "itpn/engagement.hpp"
#include "itpn/errors.hpp"
#include "itpn/saturation.hpp"

namespace itpn {

enum class ReachingLaw {
    Standard,     // S_dot = -M sign(S)
    Exponential,  // S_dot = -(M / g(S)) sign(S)
};

/// Impact-time guidance parameters. `c` is the TPNG proportionality factor;
/// interception requires c well above (V_I + V_T)/2, enforced at scenario
/// validation as c >= 1.5 (V_I0 + V_T) with a warning below 3x.
struct GuidanceParams {
    double c = 360.0;      // [m/s]
    double alpha = 1.2;    // surface gain [1/s]
    double big_m = 1.0;    // reaching gain M
    double theta_g = 0.6;  // shaping floor, in (0,1)
    double kappa = 5.0;    // shaping rate, > 0
    int eta = 1;           // shaping exponent, >= 1
    double t_d = 70.0;     // desired impact time [s]
    ReachingLaw variant = ReachingLaw::Exponential;
};

/// Numerical guards around the singular geometries the formulas do not cover.
struct GuidanceGuards {
    double eps_d = 1e-6;          // |denominator| floor for t_go, F, B, F*, B*
    double eps_b = 1e-8;          // |B*| floor below which the command is held
    double boundary_layer = 0.0;  // > 0 replaces sign(S) by tanh(S/eps_bl); off by default
};

/// Everything the command law computed on the way to a_cmd, logged per step.
struct GuidanceDiagnostics {
    double t_go = 0.0;
    double e = 0.0;      // t_go - (t_d - t_el) [s]
    double e_dot = 0.0;  // F + B a_i
    double big_f = 0.0;
    double big_b = 0.0;
    double f_star = 0.0;
    double b_star = 0.0;
    double s_val = 0.0;  // e_dot + alpha e
    double g_val = 1.0;  // shaping gain, in (theta_g, 1]
    double a_cmd_raw = 0.0;
    double a_cmd_clamped = 0.0;
    bool clamped = false;
    bool b_star_guard = false;
    bool infeasible = false;  // heuristic: t_d - t_el < r / (V_I + V_T)
};

namespace detail {

inline double tgo_denominator(const RelativeState& rel, double c, double eps_d) {
    const double d = rel.v_theta * rel.v_theta + rel.v_r * rel.v_r + 2.0 * c * rel.v_r;
    if (std::abs(d) <= eps_d)
        throw DegenerateDenominatorError("time-to-go denominator |" + std::to_string(d) +
                                         "| below guard");
    return d;
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline double switching(double s, double boundary_layer) {
    return boundary_layer > 0.0 ? std::tanh(s / boundary_layer) : sign(s);
}

}  // namespace detail

/// Exact TPNG time-to-go:
///   t_go = -r (V_r + 2c) / (V_theta^2 + V_r^2 + 2 c V_r)
inline double time_to_go(const RelativeState& rel, double c, double eps_d = 1e-6) {
    const double d = detail::tgo_denominator(rel, c, eps_d);
    return -rel.r * (rel.v_r + 2.0 * c) / d;
}

/// Coefficients of the first-order impact-time error dynamics e_dot = F + B a_i:
///   F = 2c (V_r + 2c) V_theta^2 / D^2,   B = -2 (V_r + 2c) V_theta r / D^2
struct FirstOrderTerms {
    double big_f = 0.0;
    double big_b = 0.0;
};

inline FirstOrderTerms first_order_terms(const RelativeState& rel, double c,
                                         double eps_d = 1e-6) {
    const double d = detail::tgo_denominator(rel, c, eps_d);
    const double d2 = d * d;
    const double vr2c = rel.v_r + 2.0 * c;
    FirstOrderTerms t;
    t.big_f = 2.0 * c * vr2c * rel.v_theta * rel.v_theta / d2;
    t.big_b = -2.0 * vr2c * rel.v_theta * rel.r / d2;
    return t;
}

/// Coefficients of the second-order dynamics e_ddot = F* + B* a_cmd, obtained
/// by differentiating e_dot along the kinematics and the saturation ODE.
/// B* is B scaled by the saturation gain at the current achieved a_i.
struct SecondOrderTerms {
    double f_star = 0.0;
    double b_star = 0.0;
};

inline SecondOrderTerms second_order_terms(const RelativeState& rel, double a_i, double c,
                                           const SaturationParams& sp, double eps_d = 1e-6) {
    const double d = detail::tgo_denominator(rel, c, eps_d);
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double vth = rel.v_theta;
    const double vr = rel.v_r;
    const double r = rel.r;
    const double thd = rel.theta_dot;
    const double vr2c = vr + 2.0 * c;
    const double vth2 = vth * vth;
    const double vth3 = vth2 * vth;

    SecondOrderTerms t;
    t.f_star = 2.0 * c * thd * vth * (vth2 - 2.0 * vr * vr - 4.0 * c * vr) / d2
             - 4.0 * c * vth * vr2c * a_i / d2
             - 8.0 * c * vr2c * vth3 * (c * thd - a_i) / d3
             - 2.0 * a_i * (vth3 - r * vr2c * a_i) / d2
             + 8.0 * vth2 * a_i * vr2c * (c * vth - r * a_i) / d3
             + 2.0 * vr2c * vth * r * sp.lambda * a_i / d2;
    t.b_star = -2.0 * vr2c * vth * r / d2 * saturation_gain(a_i, sp);
    return t;
}

/// S = e_dot + alpha e
inline double sliding_surface(double e, double e_dot, double alpha) {
    return e_dot + alpha * e;
}

/// Reaching-gain shaping g(S) = theta_g + (1 - theta_g) exp(-kappa |S|^eta);
/// decreasing in |S| with range (theta_g, 1].
inline double gain_shaping(double s_val, double theta_g, double kappa, int eta) {
    return theta_g + (1.0 - theta_g) * std::exp(-kappa * std::pow(std::abs(s_val), eta));
}

/// The sliding-mode command
///   a_cmd = [-F* - alpha (F + B a_i) - (M / g(S)) sign(S)] / B*
/// clamped to [-chi, chi]. The standard variant uses g = 1. When |B*| falls
/// below the guard the command is zeroed and flagged; the simulator holds the
/// previous clamped command for such steps.
inline GuidanceDiagnostics guidance_command(const EngagementState& state, const RelativeState& rel,
                                            const GuidanceParams& gp, const SaturationParams& sp,
                                            const GuidanceGuards& guards = {}) {
    GuidanceDiagnostics diag;
    diag.t_go = time_to_go(rel, gp.c, guards.eps_d);
    diag.e = diag.t_go - (gp.t_d - state.t_el);

    const FirstOrderTerms fo = first_order_terms(rel, gp.c, guards.eps_d);
    diag.big_f = fo.big_f;
    diag.big_b = fo.big_b;
    diag.e_dot = fo.big_f + fo.big_b * state.a_i;
    diag.s_val = sliding_surface(diag.e, diag.e_dot, gp.alpha);
    diag.g_val = gp.variant == ReachingLaw::Exponential
                     ? gain_shaping(diag.s_val, gp.theta_g, gp.kappa, gp.eta)
                     : 1.0;

    const SecondOrderTerms so = second_order_terms(rel, state.a_i, gp.c, sp, guards.eps_d);
    diag.f_star = so.f_star;
    diag.b_star = so.b_star;

    const double closing = state.interceptor.speed + state.target.speed;
    if (closing > 0.0 && gp.t_d - state.t_el < rel.r / closing) diag.infeasible = true;

    if (std::abs(so.b_star) < guards.eps_b) {
        diag.b_star_guard = true;
        return diag;
    }

    const double reaching = gp.big_m / diag.g_val * detail::switching(diag.s_val, guards.boundary_layer);
    diag.a_cmd_raw = (-so.f_star - gp.alpha * diag.e_dot - reaching) / so.b_star;
    diag.a_cmd_clamped = std::clamp(diag.a_cmd_raw, -sp.chi, sp.chi);
    diag.clamped = diag.a_cmd_raw != diag.a_cmd_clamped;
    return diag;
}

namespace detail {

/// Adaptive Simpson quadrature of exp(-kappa s^eta) on [0, upper], to `tol`.
inline double reaching_integrand(double s, double kappa, int eta) {
    return std::exp(-kappa * std::pow(s, eta));
}

inline double simpson_recurse(double a, double b, double fa, double fm, double fb, double whole,
                              double kappa, int eta, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = reaching_integrand(lm, kappa, eta);
    const double frm = reaching_integrand(rm, kappa, eta);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_recurse(a, m, fa, flm, fm, left, kappa, eta, 0.5 * tol, depth - 1) +
           simpson_recurse(m, b, fm, frm, fb, right, kappa, eta, 0.5 * tol, depth - 1);
}

inline double reaching_integral(double upper, double kappa, int eta, double tol = 1e-10) {
    if (upper <= 0.0) return 0.0;
    const double fa = reaching_integrand(0.0, kappa, eta);
    const double fb = reaching_integrand(upper, kappa, eta);
    const double fm = reaching_integrand(0.5 * upper, kappa, eta);
    const double whole = upper / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_recurse(0.0, upper, fa, fm, fb, whole, kappa, eta, tol, 48);
}

}  // namespace detail

/// Reaching times from surface value s0: t_r1 under the standard law and the
/// always-smaller t_r2 under the shaped law,
///   t_r2 = (1/M) [theta_g |s0| + (1 - theta_g) int_0^{|s0|} exp(-kappa s^eta) ds],
/// closed form for eta = 1, adaptive quadrature otherwise.
struct ReachingTimes {
    double t_r1 = 0.0;
    double t_r2 = 0.0;
};

inline ReachingTimes reaching_times(double s0, const GuidanceParams& gp) {
    const double s_abs = std::abs(s0);
    ReachingTimes rt;
    rt.t_r1 = s_abs / gp.big_m;
    const double integral = gp.eta == 1
                                ? (1.0 - std::exp(-gp.kappa * s_abs)) / gp.kappa
                                : detail::reaching_integral(s_abs, gp.kappa, gp.eta);
    rt.t_r2 = (gp.theta_g * s_abs + (1.0 - gp.theta_g) * integral) / gp.big_m;
    return rt;
}

}  // namespace itpn
