/**
 * @file svg_plot.hpp
 * @brief Static SVG figures of a run: trajectory, range/bearing, safety, acceleration.
 *
 * Output depends only on the scenario and log, contains no scripts, and is
 * plain XML. The trajectory figure is drawn in world metres (y up) with
 * equal aspect; the time-series figures map data onto a fixed canvas. In
 * both cases the viewBox is the drawn content plus a 10% margin.
 *
 * The engagement zone drawn around each defender is the closed curve
 * origin - rho(sigma) [cos theta, sin theta], theta = gamma - sigma, for
 * sigma over (-pi, pi]. gamma is the attacker heading at the row where that
 * defender's b is smallest, so each curve shows the zone at closest approach.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ezguide/errors.hpp"
#include "ezguide/number_format.hpp"
#include "ezguide/simulator.hpp"

namespace ezguide {

enum class PlotKind { Trajectory, RangeBearing, Safety, Accel };

inline constexpr std::array<PlotKind, 4> kAllPlotKinds{PlotKind::Trajectory, PlotKind::RangeBearing,
                                                       PlotKind::Safety, PlotKind::Accel};

inline const char* to_string(PlotKind k) {
    switch (k) {
        case PlotKind::Trajectory: return "trajectory";
        case PlotKind::RangeBearing: return "range_bearing";
        case PlotKind::Safety: return "safety";
        case PlotKind::Accel: return "accel";
    }
    return "?";
}

inline std::optional<PlotKind> parse_plot_kind(std::string_view s) {
    for (PlotKind k : kAllPlotKinds)
        if (s == to_string(k)) return k;
    return std::nullopt;
}

namespace svg {

inline constexpr std::array<const char*, 6> kPalette{"#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"};
inline constexpr const char* kAttackerColor = "#1f77b4";
inline constexpr const char* kTargetColor = "#d62728";
inline constexpr const char* kCommandColor = "#ff7f0e";

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Box {
    double x0{0.0}, y0{0.0}, x1{0.0}, y1{0.0};

    void include(double x, double y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

inline Box empty_box() {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, -inf, -inf};
}

/// Accumulates SVG elements with a fixed number format.
class Document {
public:
    explicit Document(int decimals) : decimals_(decimals) {}

    std::string num(double v) const { return format_fixed(v, decimals_); }

    void raw(std::string_view s) { body_ += s; }

    void polyline(const std::vector<std::array<double, 2>>& pts, const char* color, double width,
                  std::string_view extra = {}) {
        if (pts.empty()) return;
        body_ += "<polyline fill=\"none\" stroke=\"";
        body_ += color;
        body_ += "\" stroke-width=\"" + num(width) + "\"";
        if (!extra.empty()) body_ += " " + std::string(extra);
        body_ += " points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += ' ';
            body_ += num(pts[i][0]) + "," + num(pts[i][1]);
        }
        body_ += "\"/>\n";
    }

    void line(double x0, double y0, double x1, double y1, const char* color, double width, std::string_view extra = {}) {
        body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y1) +
                 "\" stroke=\"" + color + "\" stroke-width=\"" + num(width) + "\"";
        if (!extra.empty()) body_ += " " + std::string(extra);
        body_ += "/>\n";
    }

    void text(double x, double y, double size, std::string_view s, std::string_view anchor = "start",
              const char* color = "#000") {
        body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + num(size) +
                 "\" font-family=\"sans-serif\" text-anchor=\"" + std::string(anchor) + "\" fill=\"" + color +
                 "\">" + escape(s) + "</text>\n";
    }

    std::string finish(const Box& view, double width_px, double height_px, std::string_view title) const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + format_fixed(width_px, 0) +
               "\" height=\"" + format_fixed(height_px, 0) + "\" viewBox=\"" + num(view.x0) + " " + num(view.y0) +
               " " + num(view.width()) + " " + num(view.height()) + "\">\n";
        out += "<title>" + escape(title) + "</title>\n";
        out += "<rect x=\"" + num(view.x0) + "\" y=\"" + num(view.y0) + "\" width=\"" + num(view.width()) +
               "\" height=\"" + num(view.height()) + "\" fill=\"#fff\"/>\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

private:
    int decimals_;
    std::string body_;
};

/// Row indices to plot: every row when short, otherwise an even stride
/// that always keeps the last row.
inline std::vector<std::size_t> decimate(std::size_t n, std::size_t max_points = 2000) {
    std::vector<std::size_t> idx;
    if (n == 0) return idx;
    const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

/// One time-series panel on the fixed canvas.
struct Panel {
    Box px;    ///< canvas rectangle
    Box data;  ///< t range x value range

    double X(double t) const { return px.x0 + (t - data.x0) / data.width() * px.width(); }
    double Y(double v) const {
        v = std::clamp(v, data.y0, data.y1);
        return px.y1 - (v - data.y0) / data.height() * px.height();
    }
};

struct Series {
    std::string label;
    const char* color;
    std::function<double(const TrajectoryRow&)> value;
    std::string extra{};
};

inline void draw_panel(Document& doc, const Panel& p, const TrajectoryLog& log, const std::vector<Series>& series,
                       std::string_view y_label) {
    doc.raw("<rect x=\"" + doc.num(p.px.x0) + "\" y=\"" + doc.num(p.px.y0) + "\" width=\"" + doc.num(p.px.width()) +
            "\" height=\"" + doc.num(p.px.height()) + "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n");
    for (double v : {p.data.y0, 0.5 * (p.data.y0 + p.data.y1), p.data.y1})
        doc.text(p.px.x0 - 6, p.Y(v) + 4, 11, format_fixed(v, 2), "end");
    for (int k = 0; k <= 4; ++k) {
        const double t = p.data.x0 + p.data.width() * k / 4.0;
        doc.text(p.X(t), p.px.y1 + 16, 11, format_fixed(t, 1), "middle");
    }
    const double ly = 0.5 * (p.px.y0 + p.px.y1), lx = p.px.x0 - 50;
    doc.raw("<text x=\"" + doc.num(lx) + "\" y=\"" + doc.num(ly) +
            "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 " +
            doc.num(lx) + " " + doc.num(ly) + ")\">" + escape(y_label) + "</text>\n");

    const auto idx = decimate(log.rows.size());
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::vector<std::array<double, 2>> pts;
        pts.reserve(idx.size());
        for (std::size_t i : idx) {
            const double v = series[s].value(log.rows[i]);
            if (std::isfinite(v)) pts.push_back({p.X(log.rows[i].t), p.Y(v)});
        }
        doc.polyline(pts, series[s].color, 1.5, series[s].extra);
        doc.line(p.px.x1 + 12, p.px.y0 + 10 + 16 * s, p.px.x1 + 32, p.px.y0 + 10 + 16 * s, series[s].color, 2,
                 series[s].extra);
        doc.text(p.px.x1 + 36, p.px.y0 + 14 + 16 * s, 11, series[s].label);
    }
}

/// Value range of the series over the log, padded when flat.
inline Box series_range(const TrajectoryLog& log, const std::vector<Series>& series) {
    Box b = empty_box();
    for (const auto& row : log.rows)
        for (const auto& s : series)
            if (const double v = s.value(row); std::isfinite(v)) b.include(row.t, v);
    if (!(b.x1 > b.x0)) b.x1 = b.x0 + 1.0;
    if (!(b.y1 > b.y0)) {
        b.y0 -= 0.5;
        b.y1 += 0.5;
    }
    return b;
}

inline constexpr double kCanvasW = 900.0;
inline constexpr double kPanelH = 300.0;

/// Canvas layout: panels stacked vertically, 10% margin on every side.
inline Box canvas_view(std::size_t panels) {
    const double w = kCanvasW, h = kPanelH * static_cast<double>(panels);
    return {-0.1 * w, -0.1 * h, 1.1 * w, 1.1 * h};
}

inline Box panel_rect(std::size_t k) {
    const double top = kPanelH * static_cast<double>(k);
    return {60.0, top + 20.0, kCanvasW - 170.0, top + kPanelH - 40.0};
}

inline std::string defender_label(int id) { return "D" + std::to_string(id); }

}  // namespace svg

inline std::string plot_trajectory(const Scenario& scn, const TrajectoryLog& log) {
    using namespace svg;
    Box scene = empty_box();
    for (const auto& r : log.rows) scene.include(r.state.x, r.state.y);
    scene.include(scn.target.x, scn.target.y);
    auto heading_at_min_b = [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity(), gamma = scn.attacker_init.gamma;
        for (const auto& r : log.rows) {
            if (i < r.defenders.size() && r.defenders[i].b < best) {
                best = r.defenders[i].b;
                gamma = r.state.gamma;
            }
        }
        return gamma;
    };

    std::vector<std::vector<std::array<double, 2>>> zones;
    for (std::size_t i = 0; i < scn.defenders.size(); ++i) {
        const auto& d = scn.defenders[i];
        const double gamma = heading_at_min_b(i);
        const double reach = d.range_R + d.capture_c;
        scene.include(d.origin.x - reach, d.origin.y - reach);
        scene.include(d.origin.x + reach, d.origin.y + reach);
        auto& pts = zones.emplace_back();
        constexpr int kSamples = 180;
        for (int k = 0; k <= kSamples; ++k) {
            const double sigma = -kPi + 2.0 * kPi * k / kSamples;
            const double rho = ez_boundary_rho(sigma, d);
            const double theta = gamma - sigma;
            const double x = d.origin.x - rho * std::cos(theta);
            const double y = d.origin.y - rho * std::sin(theta);
            scene.include(x, y);
            pts.push_back({x, -y});
        }
    }
    const double margin = 0.1 * std::max(scene.width(), scene.height());
    const Box view{scene.x0 - margin, -scene.y1 - margin, scene.x1 + margin, -scene.y0 + margin};
    const double unit = std::max(view.width(), view.height()) / 600.0;

    Document doc(4);
    for (std::size_t i = 0; i < scn.defenders.size(); ++i) {
        const auto& d = scn.defenders[i];
        const char* color = kPalette[i % kPalette.size()];
        doc.raw("<circle cx=\"" + doc.num(d.origin.x) + "\" cy=\"" + doc.num(-d.origin.y) + "\" r=\"" +
                format_double(d.range_R + d.capture_c) + "\" fill=\"none\" stroke=\"" + color +
                "\" stroke-width=\"" + doc.num(unit) + "\" stroke-dasharray=\"" + doc.num(unit) + "," +
                doc.num(3 * unit) + "\" class=\"max-range\"/>\n");
        doc.polyline(zones[i], color, 1.5 * unit, "class=\"engagement-zone\"");
        doc.raw("<circle cx=\"" + doc.num(d.origin.x) + "\" cy=\"" + doc.num(-d.origin.y) + "\" r=\"" +
                doc.num(3 * unit) + "\" fill=\"" + color + "\" class=\"defender\"/>\n");
        doc.text(d.origin.x + 5 * unit, -d.origin.y - 5 * unit, 14 * unit, defender_label(d.id), "start", color);
    }

    std::vector<std::array<double, 2>> path;
    for (std::size_t i : decimate(log.rows.size(), 4000)) path.push_back({log.rows[i].state.x, -log.rows[i].state.y});
    doc.polyline(path, kAttackerColor, 2 * unit, "class=\"attacker-path\"");
    if (!log.rows.empty()) {
        const auto& s0 = log.rows.front().state;
        doc.raw("<circle cx=\"" + doc.num(s0.x) + "\" cy=\"" + doc.num(-s0.y) + "\" r=\"" + doc.num(3 * unit) +
                "\" fill=\"" + kAttackerColor + "\" class=\"attacker-start\"/>\n");
        doc.text(s0.x + 5 * unit, -s0.y - 5 * unit, 14 * unit, "A", "start", kAttackerColor);
    }
    const double m = 5 * unit;
    doc.raw("<rect x=\"" + doc.num(scn.target.x - m) + "\" y=\"" + doc.num(-scn.target.y - m) + "\" width=\"" +
            doc.num(2 * m) + "\" height=\"" + doc.num(2 * m) + "\" fill=\"" + kTargetColor + "\" class=\"target\"/>\n");
    doc.text(scn.target.x + 2 * m, -scn.target.y - m, 14 * unit, "T", "start", kTargetColor);
    doc.text(view.x0 + 10 * unit, view.y0 + 18 * unit, 14 * unit,
             std::string("outcome: ") + to_string(log.outcome.kind));

    const double px_w = 800.0;
    return doc.finish(view, px_w, px_w * view.height() / view.width(), "Trajectory");
}

inline std::string plot_range_bearing(const Scenario& scn, const TrajectoryLog& log) {
    using namespace svg;
    (void)scn;
    std::vector<Series> ranges{{"r_AT", kTargetColor, [](const TrajectoryRow& r) { return r.r_AT; }}};
    std::vector<Series> bearings{{"sigma_AT", kTargetColor, [](const TrajectoryRow& r) { return r.sigma_AT; }}};
    for (std::size_t i = 0; i < log.defender_ids.size(); ++i) {
        const char* color = kPalette[i % kPalette.size()];
        const std::string name = defender_label(log.defender_ids[i]);
        ranges.push_back({"r_A" + name, color, [i](const TrajectoryRow& r) { return r.defenders[i].r; }});
        bearings.push_back({"sigma_A" + name, color, [i](const TrajectoryRow& r) { return r.defenders[i].sigma; }});
    }
    Document doc(3);
    Box rb = series_range(log, ranges);
    rb.y0 = std::min(rb.y0, 0.0);
    draw_panel(doc, {panel_rect(0), rb}, log, ranges, "range (m)");
    draw_panel(doc, {panel_rect(1), {rb.x0, -kPi, rb.x1, kPi}}, log, bearings, "lead angle (rad)");
    const Box view = canvas_view(2);
    return doc.finish(view, view.width(), view.height(), "Range and lead angle");
}

inline std::string plot_safety(const Scenario& scn, const TrajectoryLog& log) {
    using namespace svg;
    (void)scn;
    std::vector<Series> series{{"h", "#000", [](const TrajectoryRow& r) { return r.guidance.h; }}};
    for (std::size_t i = 0; i < log.defender_ids.size(); ++i) {
        series.push_back({"b_" + std::to_string(log.defender_ids[i]), kPalette[i % kPalette.size()],
                          [i](const TrajectoryRow& r) { return r.defenders[i].b; }});
    }
    Document doc(3);
    Box b = series_range(log, series);
    b.y0 = std::min(b.y0, 0.0);
    b.y1 = std::max(b.y1, 0.0);
    const Panel p{panel_rect(0), b};
    doc.line(p.px.x0, p.Y(0.0), p.px.x1, p.Y(0.0), "#888", 1, "class=\"zero-line\"");
    draw_panel(doc, p, log, series, "safety (m)");
    const Box view = canvas_view(1);
    return doc.finish(view, view.width(), view.height(), "Safety constraints");
}

inline std::string plot_accel(const Scenario& scn, const TrajectoryLog& log) {
    using namespace svg;
    const double a_max = scn.params.a_max;
    std::vector<Series> series{
        {"a_A", kAttackerColor, [](const TrajectoryRow& r) { return r.state.a_A; }},
        {"a_d", "#000", [](const TrajectoryRow& r) { return r.guidance.a_d; }, "stroke-dasharray=\"6,3\""},
        {"a_c", kCommandColor, [](const TrajectoryRow& r) { return r.guidance.a_c; }}};
    // a_c can be very large next to the bound; the range follows a_A and a_d
    // and a_c is clipped to it.
    Box b = series_range(log, {series[0], series[1]});
    b.y0 = std::min(b.y0, -1.2 * a_max);
    b.y1 = std::max(b.y1, 1.2 * a_max);
    const Panel p{panel_rect(0), b};
    Document doc(3);
    for (double s : {-1.0, 1.0})
        doc.line(p.px.x0, p.Y(s * a_max), p.px.x1, p.Y(s * a_max), "#000", 1,
                 "stroke-dasharray=\"4,4\" class=\"accel-bound\"");
    draw_panel(doc, p, log, series, "acceleration (m/s^2)");
    const Box view = canvas_view(1);
    return doc.finish(view, view.width(), view.height(), "Lateral acceleration");
}

inline std::string emit_plot(const Scenario& scn, const TrajectoryLog& log, PlotKind kind) {
    if (log.rows.empty()) throw Error("cannot plot an empty trajectory log");
    switch (kind) {
        case PlotKind::Trajectory: return plot_trajectory(scn, log);
        case PlotKind::RangeBearing: return plot_range_bearing(scn, log);
        case PlotKind::Safety: return plot_safety(scn, log);
        case PlotKind::Accel: return plot_accel(scn, log);
    }
    throw Error("unknown plot kind");
}

/// Writes <dir>/<kind>.svg for every kind.
inline void write_plots(const Scenario& scn, const TrajectoryLog& log, const std::filesystem::path& dir) {
    for (PlotKind k : kAllPlotKinds) {
        const auto path = dir / (std::string(to_string(k)) + ".svg");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path.string() + "'");
        out << emit_plot(scn, log, k);
        if (!out) throw Error("failed writing '" + path.string() + "'");
    }
}

}  // namespace ezguide
