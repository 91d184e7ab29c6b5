#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "itpn/errors.hpp"
#include "itpn/sim.hpp"

namespace itpn {

inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,x_i,y_i,x_t,y_t,r,theta_los,v_i,gamma_i,v_r,v_theta,t_go,e,s,g,a_cmd,a_i,clamped,b_guard";

namespace detail {

inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline double field_double(std::string_view f, int line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size())
        throw ParseError(line_no, "bad numeric field '" + std::string(f) + "'");
    return v;
}

}  // namespace detail

/// One parsed trajectory row; mirrors the CSV schema above.
struct TrajectoryRow {
    double t, x_i, y_i, x_t, y_t, r, theta_los, v_i, gamma_i, v_r, v_theta;
    double t_go, e, s, g, a_cmd, a_i;
    bool clamped, b_guard;
};

/// Full round-trip precision, one row per logged step.
inline void write_trajectory_csv(const TrajectoryLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::string buf;
    buf.reserve(256);
    buf.append(kTrajectoryCsvHeader);
    buf.push_back('\n');
    out << buf;
    for (const StepRecord& rec : log.records) {
        buf.clear();
        const double cols[] = {rec.t_el, rec.interceptor.x, rec.interceptor.y,
                               rec.target.x, rec.target.y, rec.rel.r, rec.rel.theta_los,
                               rec.interceptor.speed, rec.interceptor.gamma,
                               rec.rel.v_r, rec.rel.v_theta, rec.diag.t_go, rec.diag.e,
                               rec.diag.s_val, rec.diag.g_val, rec.diag.a_cmd_clamped, rec.a_i};
        for (double c : cols) {
            detail::append_double(buf, c);
            buf.push_back(',');
        }
        buf.push_back(rec.diag.clamped ? '1' : '0');
        buf.push_back(',');
        buf.push_back(rec.diag.b_star_guard ? '1' : '0');
        buf.push_back('\n');
        out << buf;
    }
    if (!out) throw IoError("write failed for " + path.string());
}

inline std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrajectoryCsvHeader) throw ParseError(1, "unexpected header");

    std::vector<TrajectoryRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = detail::split_fields(line);
        if (f.size() != 19) throw ParseError(line_no, "expected 19 fields");
        TrajectoryRow row;
        double* slots[] = {&row.t, &row.x_i, &row.y_i, &row.x_t, &row.y_t, &row.r,
                           &row.theta_los, &row.v_i, &row.gamma_i, &row.v_r, &row.v_theta,
                           &row.t_go, &row.e, &row.s, &row.g, &row.a_cmd, &row.a_i};
        for (std::size_t i = 0; i < 17; ++i) *slots[i] = detail::field_double(f[i], line_no);
        if ((f[17] != "0" && f[17] != "1") || (f[18] != "0" && f[18] != "1"))
            throw ParseError(line_no, "flag fields must be 0 or 1");
        row.clamped = f[17] == "1";
        row.b_guard = f[18] == "1";
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(line_no, "no data rows");
    return rows;
}

/// Per-run outcome row used by the CLI summary and the comparison table.
struct RunSummary {
    std::string label;
    SimResult result;
};

inline void write_summary_csv(const std::vector<RunSummary>& rows,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "label,intercepted,t_f,miss,impact_time_error,convergence_time,j,"
           "peak_a_i,peak_a_cmd,clamp_steps,b_guard_steps,infeasible_steps,records,t_end\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const RunSummary& r : rows) {
        std::string buf = r.label;
        buf.push_back(',');
        buf.push_back(r.result.intercepted ? '1' : '0');
        buf.push_back(',');
        const double cols[] = {r.result.t_f.value_or(nan), r.result.miss,
                               r.result.impact_time_error.value_or(nan),
                               r.result.convergence_time.value_or(nan),
                               r.result.control_effort_j, r.result.peak_a_i, r.result.peak_a_cmd};
        for (double c : cols) {
            detail::append_double(buf, c);
            buf.push_back(',');
        }
        buf += std::to_string(r.result.clamp_steps) + "," + std::to_string(r.result.b_guard_steps) +
               "," + std::to_string(r.result.infeasible_steps) + "," +
               std::to_string(r.result.records) + ",";
        detail::append_double(buf, r.result.t_end);
        out << buf << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace itpn
