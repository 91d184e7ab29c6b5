#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "itpn/errors.hpp"
#include "itpn/sim.hpp"

namespace itpn {

namespace svg_detail {

inline const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
inline constexpr int kPaletteSize = 8;

inline std::string px(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

inline std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Tick spacing of the form {1,2,5}*10^k giving 4-8 divisions.
inline double nice_step(double range) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step = 10.0;
    if (frac <= 1.0) step = 1.0;
    else if (frac <= 2.0) step = 2.0;
    else if (frac <= 5.0) step = 5.0;
    return step * mag;
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void pad() {
        if (hi <= lo) hi = lo + 1.0;
        const double p = 0.05 * (hi - lo);
        lo -= p;
        hi += p;
    }
};

}  // namespace svg_detail

struct PlotSeries {
    std::string label;
    std::string color;
    bool dashed = false;
    bool right_axis = false;
    std::vector<std::pair<double, double>> points;
};

struct PlotMarker {
    double x = 0.0, y = 0.0;
    bool cross = false;  // false = circle (launch), true = cross (intercept)
    std::string color;
};

struct PlotHLine {
    double y = 0.0;
    std::string label;
};

/// One 2-D line chart with optional right-hand axis, rendered to SVG 1.1.
/// Output depends only on the data added, so identical logs give identical bytes.
class LinePlot {
public:
    LinePlot(std::string title, std::string x_label, std::string y_label,
             std::string y2_label = "")
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
          y2_label_(std::move(y2_label)) {}

    void add_series(PlotSeries s) { series_.push_back(std::move(s)); }
    void add_marker(PlotMarker m) { markers_.push_back(std::move(m)); }
    void add_hline(PlotHLine h) { hlines_.push_back(std::move(h)); }

    void render(const std::filesystem::path& path) const {
        namespace d = svg_detail;
        d::AxisRange xr, yr, y2r;
        bool first = true;
        bool any_right = false;
        for (const auto& s : series_) {
            for (const auto& [x, y] : s.points) {
                if (first) {
                    xr.lo = xr.hi = x;
                    yr.lo = yr.hi = y;
                    first = false;
                }
                xr.include(x);
                (s.right_axis ? y2r : yr).include(y);
            }
            any_right = any_right || s.right_axis;
        }
        for (const auto& m : markers_) {
            xr.include(m.x);
            yr.include(m.y);
        }
        for (const auto& h : hlines_) yr.include(h.y);
        xr.pad();
        yr.pad();
        y2r.pad();

        const double w = 720, h = 480;
        const double ml = 72, mr = any_right ? 72 : 24, mt = 40, mb = 56;
        auto sx = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * (w - ml - mr); };
        auto sy = [&](double y) { return h - mb - (y - yr.lo) / (yr.hi - yr.lo) * (h - mt - mb); };
        auto sy2 = [&](double y) { return h - mb - (y - y2r.lo) / (y2r.hi - y2r.lo) * (h - mt - mb); };

        std::string out;
        out.reserve(1 << 16);
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + d::num(w) + "\" height=\"" +
               d::num(h) + "\" viewBox=\"0 0 " + d::num(w) + " " + d::num(h) + "\">\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        out += "<text x=\"" + d::px(w / 2) + "\" y=\"24\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"15\">" + title_ + "</text>\n";

        // grid + ticks
        const double xstep = d::nice_step(xr.hi - xr.lo);
        for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-12 * xstep; t += xstep) {
            const double X = sx(t);
            out += "<line x1=\"" + d::px(X) + "\" y1=\"" + d::px(mt) + "\" x2=\"" + d::px(X) +
                   "\" y2=\"" + d::px(h - mb) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
            out += "<text x=\"" + d::px(X) + "\" y=\"" + d::px(h - mb + 18) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
                   d::num(std::abs(t) < 1e-12 ? 0.0 : t) + "</text>\n";
        }
        const double ystep = d::nice_step(yr.hi - yr.lo);
        for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-12 * ystep; t += ystep) {
            const double Y = sy(t);
            out += "<line x1=\"" + d::px(ml) + "\" y1=\"" + d::px(Y) + "\" x2=\"" + d::px(w - mr) +
                   "\" y2=\"" + d::px(Y) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
            out += "<text x=\"" + d::px(ml - 6) + "\" y=\"" + d::px(Y + 4) +
                   "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
                   d::num(std::abs(t) < 1e-12 ? 0.0 : t) + "</text>\n";
        }
        if (any_right) {
            const double y2step = d::nice_step(y2r.hi - y2r.lo);
            for (double t = std::ceil(y2r.lo / y2step) * y2step; t <= y2r.hi + 1e-12 * y2step;
                 t += y2step) {
                const double Y = sy2(t);
                out += "<text x=\"" + d::px(w - mr + 6) + "\" y=\"" + d::px(Y + 4) +
                       "\" text-anchor=\"start\" font-family=\"sans-serif\" font-size=\"11\">" +
                       d::num(std::abs(t) < 1e-12 ? 0.0 : t) + "</text>\n";
            }
        }

        // frame + axis labels
        out += "<rect x=\"" + d::px(ml) + "\" y=\"" + d::px(mt) + "\" width=\"" + d::px(w - ml - mr) +
               "\" height=\"" + d::px(h - mt - mb) +
               "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + d::px(ml + (w - ml - mr) / 2) + "\" y=\"" + d::px(h - 14) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label_ +
               "</text>\n";
        out += "<text x=\"18\" y=\"" + d::px(mt + (h - mt - mb) / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "transform=\"rotate(-90 18 " + d::px(mt + (h - mt - mb) / 2) + ")\">" + y_label_ +
               "</text>\n";
        if (any_right && !y2_label_.empty())
            out += "<text x=\"" + d::px(w - 16) + "\" y=\"" + d::px(mt + (h - mt - mb) / 2) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
                   "transform=\"rotate(90 " + d::px(w - 16) + " " + d::px(mt + (h - mt - mb) / 2) +
                   ")\">" + y2_label_ + "</text>\n";

        for (const auto& hl : hlines_) {
            const double Y = sy(hl.y);
            out += "<line x1=\"" + d::px(ml) + "\" y1=\"" + d::px(Y) + "\" x2=\"" + d::px(w - mr) +
                   "\" y2=\"" + d::px(Y) +
                   "\" stroke=\"#444444\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
            if (!hl.label.empty())
                out += "<text x=\"" + d::px(w - mr - 4) + "\" y=\"" + d::px(Y - 4) +
                       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
                       hl.label + "</text>\n";
        }

        for (const auto& s : series_) {
            if (s.points.empty()) continue;
            out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
            if (s.dashed) out += " stroke-dasharray=\"5,3\"";
            out += " points=\"";
            for (const auto& [x, y] : s.points) {
                out += d::px(sx(x));
                out.push_back(',');
                out += d::px(s.right_axis ? sy2(y) : sy(y));
                out.push_back(' ');
            }
            out += "\"/>\n";
        }

        for (const auto& m : markers_) {
            const double X = sx(m.x), Y = sy(m.y);
            if (m.cross) {
                out += "<path d=\"M " + d::px(X - 5) + " " + d::px(Y - 5) + " L " + d::px(X + 5) +
                       " " + d::px(Y + 5) + " M " + d::px(X - 5) + " " + d::px(Y + 5) + " L " +
                       d::px(X + 5) + " " + d::px(Y - 5) + "\" stroke=\"" + m.color +
                       "\" stroke-width=\"2\" fill=\"none\"/>\n";
            } else {
                out += "<circle cx=\"" + d::px(X) + "\" cy=\"" + d::px(Y) +
                       "\" r=\"4.5\" stroke=\"" + m.color + "\" stroke-width=\"2\" fill=\"none\"/>\n";
            }
        }

        // legend, top-right inside the frame
        double ly = mt + 16;
        for (const auto& s : series_) {
            if (s.label.empty()) continue;
            out += "<line x1=\"" + d::px(w - mr - 150) + "\" y1=\"" + d::px(ly - 4) + "\" x2=\"" +
                   d::px(w - mr - 126) + "\" y2=\"" + d::px(ly - 4) + "\" stroke=\"" + s.color +
                   "\" stroke-width=\"2\"" + (s.dashed ? " stroke-dasharray=\"5,3\"" : "") + "/>\n";
            out += "<text x=\"" + d::px(w - mr - 120) + "\" y=\"" + d::px(ly) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
            ly += 15;
        }

        out += "</svg>\n";

        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open " + path.string() + " for writing");
        f << out;
        if (!f) throw IoError("write failed for " + path.string());
    }

private:
    std::string title_, x_label_, y_label_, y2_label_;
    std::vector<PlotSeries> series_;
    std::vector<PlotMarker> markers_;
    std::vector<PlotHLine> hlines_;
};

/// Input to the four-panel figure group.
struct PlotRun {
    std::string label;
    const TrajectoryLog* log = nullptr;
    double a_min = 0.0, a_max = 0.0;
    double t_d = 0.0;
};

namespace svg_detail {

/// Thin a polyline for plotting (keeps first and last points).
template <typename Get>
std::vector<std::pair<double, double>> sampled(const std::vector<StepRecord>& recs, Get&& get,
                                               std::size_t cap = 1500) {
    std::vector<std::pair<double, double>> pts;
    if (recs.empty()) return pts;
    const std::size_t stride = std::max<std::size_t>(1, recs.size() / cap);
    for (std::size_t i = 0; i < recs.size(); i += stride) pts.push_back(get(recs[i]));
    if ((recs.size() - 1) % stride != 0) pts.push_back(get(recs.back()));
    return pts;
}

}  // namespace svg_detail

/// Emit the standard four panels (trajectory, time-to-go, acceleration,
/// error + speed) for one or more runs overlaid; creates out_dir if needed.
inline std::vector<std::filesystem::path> render_plots(const std::vector<PlotRun>& runs,
                                                       const std::filesystem::path& out_dir) {
    namespace d = svg_detail;
    if (runs.empty()) throw ValidationError("render_plots needs at least one run");
    std::filesystem::create_directories(out_dir);

    LinePlot traj("Trajectories", "x [m]", "y [m]");
    LinePlot tgo("Time-to-go", "time [s]", "t_go [s]");
    LinePlot accel("Acceleration", "time [s]", "acceleration [m/s^2]");
    LinePlot err("Impact-time error and speed", "time [s]", "e [s]", "V_I [m/s]");

    accel.add_hline({runs.front().a_max, "a_max"});
    accel.add_hline({runs.front().a_min, "a_min"});

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& run = runs[i];
        const char* color = d::kPalette[i % d::kPaletteSize];
        const auto& recs = run.log->records;
        if (recs.empty()) continue;

        traj.add_series({run.label, color, false, false,
                         d::sampled(recs, [](const StepRecord& r) {
                             return std::pair{r.interceptor.x, r.interceptor.y};
                         })});
        if (i == 0)
            traj.add_series({"target", "#999999", true, false,
                             d::sampled(recs, [](const StepRecord& r) {
                                 return std::pair{r.target.x, r.target.y};
                             })});
        traj.add_marker({recs.front().interceptor.x, recs.front().interceptor.y, false, color});
        traj.add_marker({recs.back().interceptor.x, recs.back().interceptor.y, true, color});
        if (i == 0)
            traj.add_marker({recs.front().target.x, recs.front().target.y, false, "#999999"});

        tgo.add_series({run.label, color, false, false,
                        d::sampled(recs, [](const StepRecord& r) {
                            return std::pair{r.t_el, r.diag.t_go};
                        })});

        accel.add_series({run.label + " a_I", color, false, false,
                          d::sampled(recs, [](const StepRecord& r) {
                              return std::pair{r.t_el, r.a_i};
                          })});
        accel.add_series({run.label + " a_I^c", color, true, false,
                          d::sampled(recs, [](const StepRecord& r) {
                              return std::pair{r.t_el, r.diag.a_cmd_clamped};
                          })});

        err.add_series({run.label + " e", color, false, false,
                        d::sampled(recs, [](const StepRecord& r) {
                            return std::pair{r.t_el, r.diag.e};
                        })});
        err.add_series({run.label + " V_I", color, true, true,
                        d::sampled(recs, [](const StepRecord& r) {
                            return std::pair{r.t_el, r.interceptor.speed};
                        })});
    }

    const std::vector<std::filesystem::path> files = {
        out_dir / "trajectory.svg", out_dir / "tgo.svg", out_dir / "acceleration.svg",
        out_dir / "error_velocity.svg"};
    traj.render(files[0]);
    tgo.render(files[1]);
    accel.render(files[2]);
    err.render(files[3]);
    return files;
}

}  // namespace itpn
