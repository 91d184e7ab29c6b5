#pragma once

// Scenario documents are sectioned key = value text (INI style):
//
//   schema_version = 1          before any section header
//   [engagement]                r0/theta0_deg (polar) or xi/yi/xt/yt (cartesian),
//                               vi, vt, gamma_i_deg, gamma_t_deg
//   [guidance]                  c, alpha, m, theta_g, kappa, eta, td, variant
//   [saturation]                a_min, a_max, n, lambda, chi
//   [sim]                       dt, t_max, kill_radius, convergence_eps, eps_d,
//                               eps_b, v_min, boundary_layer, command_hold
//   [sweep]                     td, gamma_i_deg, gamma_t_deg (comma lists)
//   [output]                    dir, plots, name
//
// '#' or ';' starts a comment. Unknown sections or keys are parse errors. An
// empty document is the default engagement: 70 m/s interceptor vs 50 m/s
// target, 5 km apart along the reference axis, headings 15/120 deg, td 70 s.
// README.md documents every key and default.

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "itpn/angles.hpp"
#include "itpn/errors.hpp"
#include "itpn/sim.hpp"

namespace itpn {

struct ScenarioSpec {
    std::string name = "run";

    bool cartesian = false;
    double r0 = 5000.0;      // [m]
    double theta0 = 0.0;     // initial LOS angle [rad]
    double xi = 0.0, yi = 0.0, xt = 0.0, yt = 0.0;

    double vi = 70.0;        // [m/s]
    double vt = 50.0;        // [m/s]
    double gamma_i = deg_to_rad(15.0);
    double gamma_t = deg_to_rad(120.0);

    GuidanceParams guidance;
    SaturationParams saturation;
    SimConfig config;
    std::optional<double> t_max;  // explicit horizon; default is td + 30 per run

    std::vector<double> td_sweep;       // empty = single td from guidance.t_d
    std::vector<double> gamma_i_sweep;  // radians
    std::vector<double> gamma_t_sweep;  // radians

    std::string out_dir = "out";
    bool out_dir_set = false;
    bool plots = true;

    std::vector<std::string> warnings;

    std::vector<RunSetup> expand() const;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_number(std::string_view v, int line) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParseError(line, "expected a number, got '" + std::string(v) + "'");
    return out;
}

inline int parse_int(std::string_view v, int line) {
    const double d = parse_number(v, line);
    const int i = static_cast<int>(std::lround(d));
    if (d != static_cast<double>(i))
        throw ParseError(line, "expected an integer, got '" + std::string(v) + "'");
    return i;
}

inline bool parse_bool(std::string_view v, int line) {
    v = trim(v);
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw ParseError(line, "expected on/off/true/false, got '" + std::string(v) + "'");
}

inline std::vector<double> parse_list(std::string_view v, int line) {
    std::vector<double> out;
    std::size_t start = 0;
    const std::string s(v);
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        if (comma == std::string::npos) comma = s.size();
        const std::string_view item = trim(std::string_view(s).substr(start, comma - start));
        if (!item.empty()) out.push_back(parse_number(item, line));
        start = comma + 1;
    }
    return out;
}

/// Shortest decimal that round-trips; used for run labels and CSV cells.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline ScenarioSpec parse_scenario(const std::string& text) {
    ScenarioSpec spec;
    std::string section;

    bool saw_polar = false;
    bool saw_cart_xi = false, saw_cart_yi = false, saw_cart_xt = false, saw_cart_yt = false;
    bool saw_c = false, saw_chi = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto pos = line.find_first_of("#;"); pos != std::string_view::npos)
            line = line.substr(0, pos);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(line_no, "unterminated section header");
            section = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (section != "engagement" && section != "guidance" && section != "saturation" &&
                section != "sim" && section != "sweep" && section != "output")
                throw ParseError(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError(line_no, "expected 'key = value'");
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (val.empty()) throw ParseError(line_no, "empty value for '" + key + "'");

        auto num = [&] { return detail::parse_number(val, line_no); };

        if (section.empty()) {
            if (key == "schema_version") {
                if (detail::parse_int(val, line_no) != 1)
                    throw ParseError(line_no, "unsupported schema_version (expected 1)");
            } else {
                throw ParseError(line_no, "key '" + key + "' outside any section");
            }
        } else if (section == "engagement") {
            if (key == "r0") { spec.r0 = num(); saw_polar = true; }
            else if (key == "theta0_deg") { spec.theta0 = deg_to_rad(num()); saw_polar = true; }
            else if (key == "xi") { spec.xi = num(); saw_cart_xi = true; }
            else if (key == "yi") { spec.yi = num(); saw_cart_yi = true; }
            else if (key == "xt") { spec.xt = num(); saw_cart_xt = true; }
            else if (key == "yt") { spec.yt = num(); saw_cart_yt = true; }
            else if (key == "vi") spec.vi = num();
            else if (key == "vt") spec.vt = num();
            else if (key == "gamma_i_deg") spec.gamma_i = deg_to_rad(num());
            else if (key == "gamma_t_deg") spec.gamma_t = deg_to_rad(num());
            else throw ParseError(line_no, "unknown key '" + key + "' in [engagement]");
        } else if (section == "guidance") {
            if (key == "c") { spec.guidance.c = num(); saw_c = true; }
            else if (key == "alpha") spec.guidance.alpha = num();
            else if (key == "m") spec.guidance.big_m = num();
            else if (key == "theta_g") spec.guidance.theta_g = num();
            else if (key == "kappa") spec.guidance.kappa = num();
            else if (key == "eta") spec.guidance.eta = detail::parse_int(val, line_no);
            else if (key == "td") spec.guidance.t_d = num();
            else if (key == "variant") {
                const std::string v(val);
                if (v == "standard") spec.guidance.variant = ReachingLaw::Standard;
                else if (v == "exponential") spec.guidance.variant = ReachingLaw::Exponential;
                else throw ParseError(line_no, "variant must be standard or exponential");
            }
            else throw ParseError(line_no, "unknown key '" + key + "' in [guidance]");
        } else if (section == "saturation") {
            if (key == "a_min") spec.saturation.a_min = num();
            else if (key == "a_max") spec.saturation.a_max = num();
            else if (key == "n") spec.saturation.n = detail::parse_int(val, line_no);
            else if (key == "lambda") spec.saturation.lambda = num();
            else if (key == "chi") { spec.saturation.chi = num(); saw_chi = true; }
            else throw ParseError(line_no, "unknown key '" + key + "' in [saturation]");
        } else if (section == "sim") {
            if (key == "dt") spec.config.dt = num();
            else if (key == "t_max") spec.t_max = num();
            else if (key == "kill_radius") spec.config.kill_radius = num();
            else if (key == "convergence_eps") spec.config.convergence_eps = num();
            else if (key == "eps_d") spec.config.guards.eps_d = num();
            else if (key == "eps_b") spec.config.guards.eps_b = num();
            else if (key == "v_min") spec.config.v_min = num();
            else if (key == "boundary_layer") spec.config.guards.boundary_layer = num();
            else if (key == "command_hold") spec.config.command_hold = detail::parse_bool(val, line_no);
            else throw ParseError(line_no, "unknown key '" + key + "' in [sim]");
        } else if (section == "sweep") {
            if (key == "td") spec.td_sweep = detail::parse_list(val, line_no);
            else if (key == "gamma_i_deg") {
                spec.gamma_i_sweep = detail::parse_list(val, line_no);
                for (double& g : spec.gamma_i_sweep) g = deg_to_rad(g);
            }
            else if (key == "gamma_t_deg") {
                spec.gamma_t_sweep = detail::parse_list(val, line_no);
                for (double& g : spec.gamma_t_sweep) g = deg_to_rad(g);
            }
            else throw ParseError(line_no, "unknown key '" + key + "' in [sweep]");
            if (key == "td" && spec.td_sweep.empty())
                throw ValidationError("sweep axis 'td' must be non-empty");
            if (key == "gamma_i_deg" && spec.gamma_i_sweep.empty())
                throw ValidationError("sweep axis 'gamma_i_deg' must be non-empty");
            if (key == "gamma_t_deg" && spec.gamma_t_sweep.empty())
                throw ValidationError("sweep axis 'gamma_t_deg' must be non-empty");
        } else if (section == "output") {
            if (key == "dir") { spec.out_dir = std::string(val); spec.out_dir_set = true; }
            else if (key == "plots") spec.plots = detail::parse_bool(val, line_no);
            else if (key == "name") spec.name = std::string(val);
            else throw ParseError(line_no, "unknown key '" + key + "' in [output]");
        }
    }

    const bool any_cart = saw_cart_xi || saw_cart_yi || saw_cart_xt || saw_cart_yt;
    if (any_cart && saw_polar)
        throw ValidationError("exactly one geometry form allowed: polar (r0/theta0_deg) or "
                              "cartesian (xi/yi/xt/yt)");
    if (any_cart) {
        if (!(saw_cart_xi && saw_cart_yi && saw_cart_xt && saw_cart_yt))
            throw ValidationError("cartesian geometry requires all of xi, yi, xt, yt");
        spec.cartesian = true;
    }

    // Parameter invariants.
    if (spec.vi < 0.0 || spec.vt < 0.0) throw ValidationError("speeds must be non-negative");
    if (!spec.cartesian && spec.r0 <= 0.0) throw ValidationError("r0 must be positive");
    if (spec.cartesian && std::hypot(spec.xt - spec.xi, spec.yt - spec.yi) < kCoLocatedRadius)
        throw ValidationError("cartesian geometry places the vehicles on top of each other");
    if (!(spec.guidance.theta_g > 0.0 && spec.guidance.theta_g < 1.0))
        throw ValidationError("theta_g must lie in (0,1)");
    if (spec.guidance.kappa <= 0.0) throw ValidationError("kappa must be positive");
    if (spec.guidance.eta < 1) throw ValidationError("eta must be a positive integer");
    if (spec.guidance.alpha <= 0.0) throw ValidationError("alpha must be positive");
    if (spec.guidance.big_m <= 0.0) throw ValidationError("m must be positive");
    if (spec.saturation.a_max <= 0.0) throw ValidationError("a_max must be positive");
    if (spec.saturation.a_min >= 0.0) throw ValidationError("a_min must be negative");
    if (spec.saturation.n < 1) throw ValidationError("n must be a positive integer");
    if (!(spec.saturation.lambda > 0.0 && spec.saturation.lambda < 1.0))
        throw ValidationError("lambda must lie in (0,1)");
    if (spec.config.dt <= 0.0) throw ValidationError("dt must be positive");
    if (spec.t_max && *spec.t_max <= 0.0) throw ValidationError("t_max must be positive");
    if (spec.config.kill_radius <= 0.0) throw ValidationError("kill_radius must be positive");
    if (spec.config.convergence_eps <= 0.0) throw ValidationError("convergence_eps must be positive");
    if (spec.config.v_min <= 0.0) throw ValidationError("v_min must be positive");
    if (spec.config.guards.eps_d <= 0.0 || spec.config.guards.eps_b <= 0.0)
        throw ValidationError("eps_d and eps_b must be positive");
    if (spec.config.guards.boundary_layer < 0.0)
        throw ValidationError("boundary_layer must be non-negative");

    if (!saw_c) spec.guidance.c = 3.0 * (spec.vi + spec.vt);
    if (!saw_chi) spec.saturation.chi = default_chi(spec.saturation.a_max, spec.saturation.a_min);
    if (spec.saturation.chi <= std::max(spec.saturation.a_max, -spec.saturation.a_min))
        throw ValidationError("chi must exceed max(a_max, -a_min)");

    const double speed_sum = spec.vi + spec.vt;
    if (spec.guidance.c < 1.5 * speed_sum)
        throw ValidationError("proportionality factor c must be at least 1.5*(vi+vt)");
    if (spec.guidance.c < 3.0 * speed_sum)
        spec.warnings.push_back("c = " + detail::format_double(spec.guidance.c) +
                                " is below 3*(vi+vt) = " + detail::format_double(3.0 * speed_sum) +
                                "; interception margin is thin");
    return spec;
}

inline ScenarioSpec parse_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

inline std::vector<RunSetup> ScenarioSpec::expand() const {
    const std::vector<double> tds = td_sweep.empty() ? std::vector<double>{guidance.t_d} : td_sweep;
    const std::vector<double> gis = gamma_i_sweep.empty() ? std::vector<double>{gamma_i} : gamma_i_sweep;
    const std::vector<double> gts = gamma_t_sweep.empty() ? std::vector<double>{gamma_t} : gamma_t_sweep;

    std::vector<RunSetup> runs;
    runs.reserve(tds.size() * gis.size() * gts.size());
    for (const double td : tds) {
        for (const double gi : gis) {
            for (const double gt : gts) {
                RunSetup run;
                run.label = name;
                if (!td_sweep.empty()) run.label += "_td" + detail::format_double(td);
                if (!gamma_i_sweep.empty()) run.label += "_gi" + detail::format_double(rad_to_deg(gi));
                if (!gamma_t_sweep.empty()) run.label += "_gt" + detail::format_double(rad_to_deg(gt));

                if (cartesian) {
                    run.interceptor = {xi, yi, vi, wrap_pi(gi)};
                    run.target = {xt, yt, vt, wrap_pi(gt)};
                } else {
                    run.interceptor = {0.0, 0.0, vi, wrap_pi(gi)};
                    run.target = {r0 * std::cos(theta0), r0 * std::sin(theta0), vt, wrap_pi(gt)};
                }
                run.guidance = guidance;
                run.guidance.t_d = td;
                run.saturation = saturation;
                run.config = config;
                run.config.t_max = t_max.value_or(td + 30.0);
                runs.push_back(std::move(run));
            }
        }
    }
    return runs;
}

}  // namespace itpn
