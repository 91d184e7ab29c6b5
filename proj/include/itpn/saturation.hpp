#pragma once

#include <cmath>
#include <string>

#include "itpn/errors.hpp"

namespace itpn {

/// Parameters of the first-order asymmetric smooth saturation ODE
///   a_i_dot = [mu (1-(a/a_max)^rho) + (1-mu)(1-(a/a_min)^rho)] a_cmd - lambda a
/// with mu = 1 for a >= 0 and 0 otherwise, rho = 2n. chi is the command
/// magnitude every caller must clamp to so the boundedness argument applies.
struct SaturationParams {
    double a_max = 8.0;    // [m/s^2], > 0
    double a_min = -4.0;   // [m/s^2], < 0
    int n = 1;             // rho = 2n
    double lambda = 0.15;  // leak rate [1/s], in (0,1)
    double chi = 400.0;    // command clamp [m/s^2], > max(a_max, -a_min)

    int rho() const { return 2 * n; }
};

inline double default_chi(double a_max, double a_min) {
    return 50.0 * std::max(a_max, -a_min);
}

/// Acceleration interval actually reachable under commands bounded by chi;
/// strictly interior to (a_min, a_max).
struct Envelope {
    double a_tilde_max = 0.0;
    double a_tilde_min = 0.0;
};

namespace detail {

inline void check_in_envelope(double a_i, const SaturationParams& p) {
    // Ops accept the closed interval; the open-interval condition is the
    // trajectory invariant enforced by the integrator's nudge.
    if (!(a_i >= p.a_min && a_i <= p.a_max))
        throw OutOfEnvelopeError("achieved acceleration " + std::to_string(a_i) +
                                 " outside [" + std::to_string(p.a_min) + ", " +
                                 std::to_string(p.a_max) + "]");
}

}  // namespace detail

/// Bracketed factor of the saturation ODE, in [0, 1]; equals 1 at a_i = 0 on
/// both branches and vanishes at the active bound.
inline double saturation_gain(double a_i, const SaturationParams& p) {
    detail::check_in_envelope(a_i, p);
    const double bound = a_i >= 0.0 ? p.a_max : p.a_min;
    return 1.0 - std::pow(a_i / bound, p.rho());
}

/// Right-hand side of the saturation ODE for achieved a_i under command a_cmd.
inline double achieved_accel_rate(double a_i, double a_cmd, const SaturationParams& p) {
    return saturation_gain(a_i, p) * a_cmd - p.lambda * a_i;
}

/// Analytic bounds on the reachable set under |a_cmd| <= chi:
///   a_tilde_max = a_max [chi/(chi + lambda a_max)]^(1/rho)
///   a_tilde_min = a_min [chi/(chi - lambda a_min)]^(1/rho)
/// The negative side mirrors the positive one in |a_min| so that
/// a_min < a_tilde_min < 0; steady states under +/-chi drive land inside.
inline Envelope envelope(const SaturationParams& p) {
    if (p.chi + p.lambda * p.a_min <= 0.0)
        throw DegenerateEnvelopeError("chi = " + std::to_string(p.chi) +
                                      " too small relative to |a_min| = " +
                                      std::to_string(-p.a_min));
    const double inv_rho = 1.0 / static_cast<double>(p.rho());
    Envelope env;
    env.a_tilde_max = p.a_max * std::pow(p.chi / (p.chi + p.lambda * p.a_max), inv_rho);
    env.a_tilde_min = p.a_min * std::pow(p.chi / (p.chi - p.lambda * p.a_min), inv_rho);
    return env;
}

/// Integrate the saturation ODE alone with classical 4-stage fixed steps.
/// `cmd` is any callable double(double t); commands are expected to satisfy
/// |cmd(t)| <= chi. Stage values are nudged back inside the closed interval
/// so a discrete overshoot cannot trip the gain's domain check.
template <typename CmdFn>
double integrate_achieved_accel(double a0, CmdFn&& cmd, double dt, double t_end,
                                const SaturationParams& p) {
    auto nudge = [&p](double a) {
        if (a >= p.a_max) return p.a_max - 1e-12;
        if (a <= p.a_min) return p.a_min + 1e-12;
        return a;
    };
    auto f = [&](double a, double t) { return achieved_accel_rate(nudge(a), cmd(t), p); };

    double a = nudge(a0);
    const long n_steps = std::lround(t_end / dt);
    for (long i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double k1 = f(a, t);
        const double k2 = f(a + 0.5 * dt * k1, t + 0.5 * dt);
        const double k3 = f(a + 0.5 * dt * k2, t + 0.5 * dt);
        const double k4 = f(a + dt * k3, t + dt);
        a = nudge(a + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }
    return a;
}

}  // namespace itpn
