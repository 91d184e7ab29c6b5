#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "itpn/csv.hpp"

namespace itpn {

/// Parameters the offline checks need that a trajectory CSV does not carry.
struct LogCheckParams {
    double a_min = -4.0;
    double a_max = 8.0;
    double alpha = 1.2;
    double big_m = 1.0;
    double theta_g = 0.6;
    double alpha_fit_tol = 0.05;  // relative tolerance on the fitted decay rate
};

struct CheckReport {
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
};

namespace detail {

inline CheckReport check_well_formed(const std::vector<TrajectoryRow>& rows) {
    CheckReport rep{"csv-well-formed"};
    if (rows.size() < 2) {
        rep.detail = "needs at least two rows";
        return rep;
    }
    const double dt = rows[1].t - rows[0].t;
    if (!(dt > 0.0)) {
        rep.detail = "non-increasing time column";
        return rep;
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double step = rows[i].t - rows[i - 1].t;
        if (!(step > 0.0) || std::abs(step - dt) > 1e-6 * dt + 1e-12) {
            rep.detail = "irregular time step at row " + std::to_string(i + 1);
            return rep;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TrajectoryRow& r = rows[i];
        const double vals[] = {r.t, r.x_i, r.y_i, r.x_t, r.y_t, r.r, r.theta_los, r.v_i,
                               r.gamma_i, r.v_r, r.v_theta, r.t_go, r.e, r.s, r.g, r.a_cmd, r.a_i};
        for (double v : vals)
            if (!std::isfinite(v)) {
                rep.detail = "non-finite value at row " + std::to_string(i + 1);
                return rep;
            }
        if (!(r.r > 0.0) || !(r.g > 0.0 && r.g <= 1.0)) {
            rep.detail = "out-of-range r or g at row " + std::to_string(i + 1);
            return rep;
        }
    }
    rep.passed = true;
    rep.detail = std::to_string(rows.size()) + " rows, dt = " + detail::split_fields("").empty()
                     ? std::to_string(dt)
                     : std::to_string(dt);
    return rep;
}

}  // namespace detail

inline std::vector<CheckReport> run_log_checks(const std::vector<TrajectoryRow>& rows,
                                               const LogCheckParams& p) {
    std::vector<CheckReport> reports;
    reports.push_back(detail::check_well_formed(rows));
    if (!reports.front().passed) {
        reports.push_back({"acceleration-bounds", false, true, "skipped: malformed log"});
        reports.push_back({"surface-monotone", false, true, "skipped: malformed log"});
        reports.push_back({"error-decay-rate", false, true, "skipped: malformed log"});
        return reports;
    }
    const double dt = rows[1].t - rows[0].t;

    {
        CheckReport rep{"acceleration-bounds"};
        rep.passed = true;
        double worst = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double a = rows[i].a_i;
            if (!(a > p.a_min && a < p.a_max)) {
                rep.passed = false;
                rep.detail = "a_i = " + std::to_string(a) + " at row " + std::to_string(i + 1) +
                             " violates (" + std::to_string(p.a_min) + ", " +
                             std::to_string(p.a_max) + ")";
                break;
            }
            worst = std::max(worst, std::max(a / p.a_max, a / p.a_min));
        }
        if (rep.passed)
            rep.detail = "all " + std::to_string(rows.size()) +
                         " samples strictly inside; max bound usage " + std::to_string(worst);
        reports.push_back(rep);
    }

    {
        // |S| must shrink between consecutive samples wherever the command was
        // neither clamped nor held, above a floor that excludes the chattering
        // band around the surface.
        CheckReport rep{"surface-monotone"};
        rep.passed = true;
        const double floor = 3.0 * p.big_m * dt / p.theta_g;
        std::size_t checked = 0;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const TrajectoryRow& r0 = rows[i];
            const TrajectoryRow& r1 = rows[i + 1];
            if (r0.clamped || r0.b_guard || r1.clamped || r1.b_guard) continue;
            if (std::abs(r0.s) <= floor) continue;
            ++checked;
            if (std::abs(r1.s) > std::abs(r0.s) + 1e-9) {
                rep.passed = false;
                rep.detail = "|S| grew " + std::to_string(std::abs(r0.s)) + " -> " +
                             std::to_string(std::abs(r1.s)) + " at row " + std::to_string(i + 1);
                break;
            }
        }
        if (rep.passed) {
            if (checked == 0) {
                rep.skipped = true;
                rep.detail = "no unguarded samples above the chatter floor";
            } else {
                rep.detail = std::to_string(checked) + " consecutive pairs decreasing";
            }
        }
        reports.push_back(rep);
    }

    {
        // After the surface is reached, e decays as exp(-alpha t); fit the
        // rate over the clean stretch of the decay.
        CheckReport rep{"error-decay-rate"};
        const double s_reach = std::max(0.05, 5.0 * p.big_m * dt / p.theta_g);
        std::size_t start = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::abs(rows[i].s) <= s_reach) {
                start = i;
                break;
            }
        }
        std::vector<std::pair<double, double>> fit;  // (t, ln|e|)
        if (start < rows.size()) {
            const double e_hi = 0.8 * std::abs(rows[start].e);
            const double e_lo = 0.02;
            const double sign0 = rows[start].e >= 0.0 ? 1.0 : -1.0;
            for (std::size_t i = start; i < rows.size(); ++i) {
                const double e = rows[i].e;
                if (e * sign0 <= 0.0) break;  // crossed zero: chatter region
                const double mag = std::abs(e);
                if (mag > e_hi) continue;
                if (mag < e_lo) break;
                fit.emplace_back(rows[i].t, std::log(mag));
            }
        }
        const double span = fit.size() >= 2 ? std::exp(fit.front().second - fit.back().second) : 0.0;
        if (fit.size() < 50 || span < 10.0) {
            rep.skipped = true;
            rep.detail = "insufficient decay window (" + std::to_string(fit.size()) + " samples)";
        } else {
            double st = 0, sy = 0, stt = 0, sty = 0;
            for (const auto& [t, y] : fit) {
                st += t;
                sy += y;
                stt += t * t;
                sty += t * y;
            }
            const double n = static_cast<double>(fit.size());
            const double slope = (n * sty - st * sy) / (n * stt - st * st);
            const double rate = -slope;
            rep.passed = std::abs(rate - p.alpha) <= p.alpha_fit_tol * p.alpha;
            std::ostringstream os;
            os << "fitted rate " << rate << " vs alpha " << p.alpha << " over "
               << fit.size() << " samples";
            rep.detail = os.str();
        }
        reports.push_back(rep);
    }

    return reports;
}

}  // namespace itpn
