#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "itpn/engagement.hpp"
#include "itpn/guidance.hpp"
#include "itpn/saturation.hpp"

namespace itpn {

struct SimConfig {
    double dt = 1e-3;              // step [s]
    double t_max = 100.0;          // horizon cap [s]
    double kill_radius = 1.0;      // interception threshold [m]
    double convergence_eps = 0.01; // sustained |e| threshold [s]
    double v_min = kDefaultSpeedFloor;
    GuidanceGuards guards;
    bool command_hold = false;     // hold the stage-1 command across a step
    std::optional<double> command_override;  // test hook: force a_cmd to a constant
};

/// One logged sample: full state plus the guidance diagnostics that produced
/// the command actually integrated over the following step.
struct StepRecord {
    double t_el = 0.0;
    VehicleState interceptor;
    VehicleState target;
    RelativeState rel;
    GuidanceDiagnostics diag;
    double a_i = 0.0;
};

struct TrajectoryLog {
    std::vector<StepRecord> records;
    std::size_t clamp_steps = 0;
    std::size_t b_guard_steps = 0;
    std::size_t infeasible_steps = 0;
};

struct SimResult {
    bool intercepted = false;
    std::optional<double> t_f;                // interception time [s]
    double miss = 0.0;                        // closest approach [m]
    std::optional<double> impact_time_error;  // t_f - t_d [s]
    std::optional<double> convergence_time;   // first t with |e| < eps sustained [s]
    double control_effort_j = 0.0;            // integral of a_i^2 dt [m^2/s^3]
    double peak_a_i = 0.0;
    double peak_a_cmd = 0.0;
    std::size_t clamp_steps = 0;
    std::size_t b_guard_steps = 0;
    std::size_t infeasible_steps = 0;
    std::size_t records = 0;
    double t_end = 0.0;  // time of the last logged sample [s]
};

/// Initial conditions plus all parameter blocks for one closed-loop run.
struct RunSetup {
    std::string label = "run";
    VehicleState interceptor;
    VehicleState target;
    GuidanceParams guidance;
    SaturationParams saturation;
    SimConfig config;
};

namespace detail {

inline double nudge_into_envelope(double a_i, const SaturationParams& sp) {
    if (a_i >= sp.a_max) return sp.a_max - 1e-12;
    if (a_i <= sp.a_min) return sp.a_min + 1e-12;
    return a_i;
}

enum class CommandMode { Live, Held };

struct StageEval {
    StateDerivative deriv;
    GuidanceDiagnostics diag;
    bool guard_hit = false;
};

inline EngagementState advance(const EngagementState& s, const StateDerivative& d, double h,
                               const SaturationParams& sp) {
    EngagementState n = s;
    n.interceptor.x += h * d.xi_dot;
    n.interceptor.y += h * d.yi_dot;
    n.interceptor.speed += h * d.speed_i_dot;
    n.interceptor.gamma += h * d.gamma_i_dot;
    n.target.x += h * d.xt_dot;
    n.target.y += h * d.yt_dot;
    n.a_i = nudge_into_envelope(s.a_i + h * d.a_i_dot, sp);
    n.t_el += h;
    return n;
}

inline bool all_finite(const EngagementState& s) {
    return std::isfinite(s.interceptor.x) && std::isfinite(s.interceptor.y) &&
           std::isfinite(s.interceptor.speed) && std::isfinite(s.interceptor.gamma) &&
           std::isfinite(s.target.x) && std::isfinite(s.target.y) && std::isfinite(s.a_i);
}

}  // namespace detail

/// Fixed-step closed-loop integrator over the seven-state system
/// (interceptor x, y, gamma, V; target x, y; achieved a_i).
class Simulator {
public:
    explicit Simulator(const RunSetup& setup) : setup_(setup) {}

    /// Evaluate guidance + dynamics at one integration stage. `mode` Held
    /// replaces the live command with `held_cmd` (B*-guard zero-order hold,
    /// per-step hold mode, and the command-override test hook all use it).
    detail::StageEval eval_stage(const EngagementState& s, double held_cmd,
                                 detail::CommandMode mode) const {
        const SimConfig& cfg = setup_.config;
        EngagementState st = s;
        st.a_i = detail::nudge_into_envelope(st.a_i, setup_.saturation);

        detail::StageEval ev;
        const RelativeState rel = derive_relative_state(st.interceptor, st.target);
        ev.diag = guidance_command(st, rel, setup_.guidance, setup_.saturation, cfg.guards);
        double cmd = ev.diag.a_cmd_clamped;
        if (mode == detail::CommandMode::Held) {
            cmd = held_cmd;
            ev.diag.a_cmd_raw = held_cmd;
            ev.diag.a_cmd_clamped = held_cmd;
            ev.diag.clamped = false;
        } else if (ev.diag.b_star_guard) {
            ev.guard_hit = true;
            return ev;  // caller restarts the step in Held mode
        }
        const double rate = achieved_accel_rate(st.a_i, cmd, setup_.saturation);
        ev.deriv = engagement_derivatives(st, rate, cfg.v_min);
        return ev;
    }

    /// One classical 4-stage step from `state`. The command is recomputed at
    /// every stage; if any stage trips the B*-guard the whole step is redone
    /// with `held_cmd` held constant. Returns the advanced state, the record
    /// for `state`, and the command to hold next.
    struct StepOutput {
        EngagementState next;
        StepRecord record;
        double held_cmd = 0.0;
    };

    StepOutput step(const EngagementState& state, double held_cmd) const {
        const SimConfig& cfg = setup_.config;
        const double dt = cfg.dt;
        const SaturationParams& sp = setup_.saturation;

        auto run_stages = [&](detail::CommandMode mode,
                              double held) -> std::optional<StepOutput> {
            detail::StageEval e1 = eval_stage(state, held, mode);
            if (e1.guard_hit) return std::nullopt;
            const double stage_hold =
                cfg.command_hold && mode == detail::CommandMode::Live ? e1.diag.a_cmd_clamped : held;
            const detail::CommandMode later_mode =
                cfg.command_hold ? detail::CommandMode::Held : mode;

            detail::StageEval e2 =
                eval_stage(detail::advance(state, e1.deriv, 0.5 * dt, sp), stage_hold, later_mode);
            if (e2.guard_hit) return std::nullopt;
            detail::StageEval e3 =
                eval_stage(detail::advance(state, e2.deriv, 0.5 * dt, sp), stage_hold, later_mode);
            if (e3.guard_hit) return std::nullopt;
            detail::StageEval e4 =
                eval_stage(detail::advance(state, e3.deriv, dt, sp), stage_hold, later_mode);
            if (e4.guard_hit) return std::nullopt;

            StateDerivative k;
            k.xi_dot = (e1.deriv.xi_dot + 2 * e2.deriv.xi_dot + 2 * e3.deriv.xi_dot + e4.deriv.xi_dot) / 6.0;
            k.yi_dot = (e1.deriv.yi_dot + 2 * e2.deriv.yi_dot + 2 * e3.deriv.yi_dot + e4.deriv.yi_dot) / 6.0;
            k.speed_i_dot = (e1.deriv.speed_i_dot + 2 * e2.deriv.speed_i_dot + 2 * e3.deriv.speed_i_dot + e4.deriv.speed_i_dot) / 6.0;
            k.gamma_i_dot = (e1.deriv.gamma_i_dot + 2 * e2.deriv.gamma_i_dot + 2 * e3.deriv.gamma_i_dot + e4.deriv.gamma_i_dot) / 6.0;
            k.xt_dot = (e1.deriv.xt_dot + 2 * e2.deriv.xt_dot + 2 * e3.deriv.xt_dot + e4.deriv.xt_dot) / 6.0;
            k.yt_dot = (e1.deriv.yt_dot + 2 * e2.deriv.yt_dot + 2 * e3.deriv.yt_dot + e4.deriv.yt_dot) / 6.0;
            k.a_i_dot = (e1.deriv.a_i_dot + 2 * e2.deriv.a_i_dot + 2 * e3.deriv.a_i_dot + e4.deriv.a_i_dot) / 6.0;

            StepOutput out;
            out.next = detail::advance(state, k, dt, sp);
            out.next.interceptor.gamma = wrap_pi(out.next.interceptor.gamma);
            out.record = make_record(state, e1.diag);
            out.held_cmd = e1.diag.a_cmd_clamped;
            return out;
        };

        std::optional<StepOutput> out;
        if (setup_.config.command_override) {
            out = run_stages(detail::CommandMode::Held, *setup_.config.command_override);
        } else {
            out = run_stages(detail::CommandMode::Live, held_cmd);
            if (!out) {
                out = run_stages(detail::CommandMode::Held, held_cmd);
                if (out) out->record.diag.b_star_guard = true;
            }
        }
        if (!out) throw NonFiniteError("step could not be evaluated");  // unreachable: Held mode never guards
        if (!detail::all_finite(out->next))
            throw NonFiniteError("non-finite state at t = " + std::to_string(out->next.t_el) +
                                 " s (label " + setup_.label + ")");
        return *out;
    }

    /// Integrate until kill-radius crossing, horizon, or abort. Logs one
    /// record per step plus the final sample.
    std::pair<SimResult, TrajectoryLog> run() const {
        const SimConfig& cfg = setup_.config;
        TrajectoryLog log;
        log.records.reserve(static_cast<std::size_t>(cfg.t_max / cfg.dt) + 2);

        EngagementState state;
        state.interceptor = setup_.interceptor;
        state.target = setup_.target;
        state.a_i = 0.0;
        state.t_el = 0.0;
        double held_cmd = setup_.config.command_override.value_or(0.0);

        bool intercepted = false;
        const double t_eps = 0.5 * cfg.dt;
        while (true) {
            const RelativeState rel = derive_relative_state(state.interceptor, state.target);
            if (rel.r <= cfg.kill_radius) {
                log_final_sample(state, held_cmd, log);
                intercepted = true;
                break;
            }
            if (state.t_el >= cfg.t_max - t_eps) {
                log_final_sample(state, held_cmd, log);
                break;
            }
            StepOutput out = step(state, held_cmd);
            push(log, out.record);
            state = out.next;
            held_cmd = out.held_cmd;
        }

        return {compute_metrics_internal(log, intercepted), std::move(log)};
    }

    /// Outcome metrics over a finished log.
    SimResult compute_metrics(const TrajectoryLog& log, bool intercepted) const {
        return compute_metrics_internal(log, intercepted);
    }

    const RunSetup& setup() const { return setup_; }

private:
    StepRecord make_record(const EngagementState& s, const GuidanceDiagnostics& diag) const {
        StepRecord rec;
        rec.t_el = s.t_el;
        rec.interceptor = s.interceptor;
        rec.target = s.target;
        rec.rel = derive_relative_state(s.interceptor, s.target);
        rec.diag = diag;
        rec.a_i = s.a_i;
        return rec;
    }

    void log_final_sample(const EngagementState& state, double held_cmd, TrajectoryLog& log) const {
        // Same diagnostics path as a step's stage 1, without advancing.
        const RelativeState rel = derive_relative_state(state.interceptor, state.target);
        GuidanceDiagnostics diag =
            guidance_command(state, rel, setup_.guidance, setup_.saturation, setup_.config.guards);
        if (setup_.config.command_override) {
            diag.a_cmd_raw = *setup_.config.command_override;
            diag.a_cmd_clamped = *setup_.config.command_override;
            diag.clamped = false;
        } else if (diag.b_star_guard) {
            diag.a_cmd_raw = held_cmd;
            diag.a_cmd_clamped = held_cmd;
        }
        push(log, make_record(state, diag));
    }

    static void push(TrajectoryLog& log, const StepRecord& rec) {
        log.records.push_back(rec);
        if (rec.diag.clamped) ++log.clamp_steps;
        if (rec.diag.b_star_guard) ++log.b_guard_steps;
        if (rec.diag.infeasible) ++log.infeasible_steps;
    }

    SimResult compute_metrics_internal(const TrajectoryLog& log, bool intercepted) const {
        const SimConfig& cfg = setup_.config;
        SimResult res;
        res.intercepted = intercepted;
        res.clamp_steps = log.clamp_steps;
        res.b_guard_steps = log.b_guard_steps;
        res.infeasible_steps = log.infeasible_steps;
        res.records = log.records.size();
        if (log.records.empty()) return res;
        res.t_end = log.records.back().t_el;

        double min_r = log.records.front().rel.r;
        for (const auto& rec : log.records) {
            min_r = std::min(min_r, rec.rel.r);
            res.peak_a_i = std::max(res.peak_a_i, std::abs(rec.a_i));
            res.peak_a_cmd = std::max(res.peak_a_cmd, std::abs(rec.diag.a_cmd_clamped));
        }
        res.miss = min_r;

        if (intercepted) {
            auto [t_f, miss] = refine_interception(log);
            res.t_f = t_f;
            res.miss = std::min(res.miss, miss);
            res.impact_time_error = t_f - setup_.guidance.t_d;
        }

        // Sustained-convergence time: first t with |e| below threshold for
        // every logged sample from there on.
        std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(log.records.size());
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(log.records.size()) - 1; i >= 0; --i) {
            if (std::abs(log.records[static_cast<std::size_t>(i)].diag.e) >= cfg.convergence_eps) break;
            idx = i;
        }
        if (idx < static_cast<std::ptrdiff_t>(log.records.size()))
            res.convergence_time = log.records[static_cast<std::size_t>(idx)].t_el;

        // Trapezoid rule over a_i^2.
        double j = 0.0;
        for (std::size_t i = 1; i < log.records.size(); ++i) {
            const double a0 = log.records[i - 1].a_i;
            const double a1 = log.records[i].a_i;
            j += 0.5 * (a0 * a0 + a1 * a1) * (log.records[i].t_el - log.records[i - 1].t_el);
        }
        res.control_effort_j = j;
        return res;
    }

    /// Quadratic through the last three (t, r) samples; the vertex estimates
    /// the true closest approach inside the final step. t_f stays within
    /// [t_last, t_last + dt) so the record-count relation to t_f is exact.
    std::pair<double, double> refine_interception(const TrajectoryLog& log) const {
        const auto& recs = log.records;
        const std::size_t n = recs.size();
        const double t_last = recs[n - 1].t_el;
        const double r_last = recs[n - 1].rel.r;
        if (n < 3) return {t_last, r_last};

        const double h = setup_.config.dt;
        const double r0 = recs[n - 3].rel.r;
        const double r1 = recs[n - 2].rel.r;
        const double r2 = r_last;
        const double b = (3.0 * r2 - 4.0 * r1 + r0) / (2.0 * h);   // dr/dt at t_last
        const double a = (r2 - 2.0 * r1 + r0) / (2.0 * h * h);     // half d2r/dt2
        if (a <= 0.0 || b >= 0.0) return {t_last, r_last};
        const double delta = std::clamp(-b / (2.0 * a), 0.0, 0.999 * h);
        const double r_min = std::max(0.0, r2 + b * delta + a * delta * delta);
        return {t_last + delta, std::min(r_min, r_last)};
    }

    RunSetup setup_;
};

/// Convenience wrapper matching the scenario-level contract.
inline std::pair<SimResult, TrajectoryLog> run(const RunSetup& setup) {
    return Simulator(setup).run();
}

}  // namespace itpn
