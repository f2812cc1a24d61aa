#pragma once

// Output files: result documents, CSV tables and SVG figures. Everything here is a pure
// function of its inputs, so reruns reproduce files byte for byte.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/baseline.hpp"
#include "renew/contingency.hpp"
#include "renew/csv_schema.hpp"
#include "renew/planner.hpp"

namespace renew::io {

using nlohmann::json;

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write '" + path.string() + "'");
    out << text;
    if (!out) fail("write failed for '" + path.string() + "'");
}

[[nodiscard]] inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

[[nodiscard]] inline json points(std::span<const Vec2> pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({p.x, p.y});
    return a;
}

[[nodiscard]] inline json metrics_json(const PlanMetrics& m) {
    return {{"fuel", number(m.fuel)},
            {"safety", number(m.safety)},
            {"length", number(m.length)},
            {"fuel_per_distance", number(m.fuel_per_distance)},
            {"states", m.states}};
}

[[nodiscard]] inline json config_json(const PlanConfig& cfg) {
    return {{"k", cfg.k},
            {"samples", cfg.n_samples},
            {"sigma", cfg.sigma},
            {"alpha", cfg.fuel.alpha},
            {"drag_exp", cfg.fuel.k_exp},
            {"padding", cfg.padding.to_string()},
            {"padding_samples", cfg.padding_samples},
            {"seed", cfg.seed}};
}

/// Planner result document: chosen channel triangles, waypoints and the metrics row.
[[nodiscard]] inline json result_json(const PlanResult& r, const Environment& env, const PlanConfig& cfg) {
    json channels = json::array();
    for (const auto& c : r.channels) {
        channels.push_back({{"id", c.channel.id},
                            {"signature", c.channel.signature.to_string()},
                            {"triangles", c.channel.triangles},
                            {"feasible", c.padded.feasible},
                            {"blocked_passing_edge", c.padded.blocked_passing_edge},
                            {"score", c.score ? json(*c.score) : json(nullptr)},
                            {"feasible_paths", c.feasible_paths},
                            {"turn_rejects", c.turn_rejects},
                            {"band_rejects", c.band_rejects}});
    }
    const auto& chosen = r.chosen_channel();
    return {{"planner", "RENEW"},
            {"environment", env.name},
            {"config", config_json(cfg)},
            {"start", {r.start.x, r.start.y}},
            {"goal", {r.goal.x, r.goal.y}},
            {"mesh", {{"vertices", r.mesh.vertices.size()}, {"triangles", r.mesh.triangles.size()}}},
            {"class_budget", r.class_budget},
            {"channels", channels},
            {"chosen",
             {{"channel", chosen.channel.id},
              {"signature", chosen.channel.signature.to_string()},
              {"triangles", chosen.channel.triangles},
              {"path_index", r.chosen_path.index},
              {"waypoints", points(r.chosen_path.waypoints)}}},
            {"metrics", metrics_json(r.metrics)}};
}

/// Baseline result in the same shape, tagged "grid A*-O" or "grid A*-S".
[[nodiscard]] inline json baseline_json(const std::string& planner, std::span<const Vec2> path, const PlanMetrics& m,
                                        const Environment& env) {
    return {{"planner", planner},
            {"environment", env.name},
            {"chosen", {{"waypoints", points(path)}}},
            {"metrics", metrics_json(m)}};
}

// Tables ------------------------------------------------------------------------------

[[nodiscard]] inline csv::Row metrics_row(const std::string& planner, int k, const PlanMetrics& m) {
    return {planner,        std::to_string(k),      csv::real(m.fuel), csv::real(m.safety), csv::real(m.length),
            csv::real(m.fuel_per_distance), std::to_string(m.states)};
}

[[nodiscard]] inline csv::Table empty_table(const csv::Schema& s) {
    csv::Table t;
    for (const auto& c : s.columns) t.header.push_back(c.name);
    return t;
}

[[nodiscard]] inline csv::Row comparison_row(const std::string& planner, const PlanMetrics& m) {
    return {planner,
            "ok",
            csv::real(m.fuel),
            csv::real(m.safety),
            csv::real(m.length),
            csv::real(m.fuel_per_distance),
            std::to_string(m.states),
            ""};
}

[[nodiscard]] inline csv::Row comparison_failure(const std::string& planner, const std::string& message) {
    return {planner, "failed", "nan", "nan", "nan", "nan", "0", message};
}

[[nodiscard]] inline csv::Table padding_table(const std::vector<ChannelOutcome>& channels) {
    auto t = empty_table(csv::schemas::padding());
    for (const auto& c : channels)
        for (const auto& e : c.padding.edges)
            t.rows.push_back({std::to_string(c.channel.id), std::to_string(e.edge_id), std::to_string(e.v0),
                              std::to_string(e.v1), std::to_string(e.triangle), csv::real(e.heading),
                              csv::real(e.offset), csv::real(e.inradius), e.clamped ? "1" : "0",
                              csv::real(c.padding.sigma), std::to_string(c.padding.n_samples),
                              c.padding.scheme.to_string()});
    return t;
}

[[nodiscard]] inline csv::Table padding_channel_table(const std::vector<ChannelOutcome>& channels) {
    auto t = empty_table(csv::schemas::padding_channels());
    for (const auto& c : channels) {
        double shortest = std::numeric_limits<double>::infinity();
        for (const double l : c.padded.usable_lengths) shortest = std::min(shortest, l);
        t.rows.push_back({std::to_string(c.channel.id), c.channel.signature.to_string(), c.padded.feasible ? "1" : "0",
                          std::to_string(c.padded.blocked_passing_edge), csv::real(shortest)});
    }
    return t;
}

/// Two rows per station (left, right); `collided` repeats the station verdict.
[[nodiscard]] inline csv::Table contingency_table(const ContingencyReport& rep) {
    auto t = empty_table(csv::schemas::contingency());
    for (std::size_t i = 0; i < rep.stations.size(); ++i) {
        const auto& s = rep.stations[i];
        for (const Turn turn : {Turn::Left, Turn::Right})
            t.rows.push_back({std::to_string(i), csv::real(s.s), csv::real(s.position.x), csv::real(s.position.y),
                              csv::real(s.heading), turn == Turn::Left ? "left" : "right",
                              csv::real(turn == Turn::Left ? s.left_clearance : s.right_clearance),
                              s.collided ? "1" : "0"});
    }
    return t;
}

[[nodiscard]] inline csv::Row contingency_summary_row(const std::string& planner, const ContingencyReport& rep,
                                                      const ContingencyConfig& cfg) {
    return {planner,         std::to_string(rep.trials),      std::to_string(rep.collisions), csv::real(rep.path_length),
            csv::real(cfg.spacing), std::to_string(cfg.seed), cfg.noise ? "1" : "0"};
}

[[nodiscard]] inline csv::Table mesh_table(const NavMesh& mesh) {
    auto t = empty_table(csv::schemas::mesh_triangles());
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& tri = mesh.triangles[i];
        const auto& nb = mesh.neighbors[i];
        t.rows.push_back({std::to_string(i), std::to_string(tri[0]), std::to_string(tri[1]), std::to_string(tri[2]),
                          mesh.is_free(static_cast<int>(i)) ? "free" : "obstacle", std::to_string(nb[0]),
                          std::to_string(nb[1]), std::to_string(nb[2])});
    }
    return t;
}

// SVG ---------------------------------------------------------------------------------

class Svg {
public:
    explicit Svg(const Rect& bounds, double width_px = 800.0) : b_(bounds) {
        scale_ = width_px / std::max(bounds.width(), 1e-9);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.2f "
                      "%.2f\">\n",
                      width_px, bounds.height() * scale_, width_px, bounds.height() * scale_);
        out_ = buf;
        rect(bounds, "#f4f8fb", "#333333", 1.0);
    }

    void polygon(std::span<const Vec2> pts, const char* fill, const char* stroke, double stroke_px,
                 double opacity = 1.0) {
        out_ += "<polygon points=\"" + coords(pts) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"" +
                attr("stroke-width", stroke_px) + attr("fill-opacity", opacity) + "/>\n";
    }

    void polyline(std::span<const Vec2> pts, const char* stroke, double stroke_px, const char* dash = nullptr) {
        out_ += "<polyline points=\"" + coords(pts) + "\" fill=\"none\" stroke=\"" + stroke + "\"" +
                attr("stroke-width", stroke_px) + (dash ? std::string(" stroke-dasharray=\"") + dash + "\"" : "") +
                "/>\n";
    }

    void circle(Vec2 c, double r_px, const char* fill) {
        const Vec2 p = map(c);
        char buf[160];
        std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\"/>\n", p.x, p.y, r_px, fill);
        out_ += buf;
    }

    void rect(const Rect& r, const char* fill, const char* stroke, double stroke_px) {
        const Polygon p{{r.xmin, r.ymin}, {r.xmax, r.ymin}, {r.xmax, r.ymax}, {r.xmin, r.ymax}};
        polygon(p, fill, stroke, stroke_px);
    }

    void text(Vec2 at, const std::string& s, double size_px = 12.0) {
        const Vec2 p = map(at);
        char buf[96];
        std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" font-size=\"%.1f\" font-family=\"sans-serif\">", p.x,
                      p.y, size_px);
        out_ += buf;
        for (const char c : s) {
            if (c == '<') out_ += "&lt;";
            else if (c == '>') out_ += "&gt;";
            else if (c == '&') out_ += "&amp;";
            else out_ += c;
        }
        out_ += "</text>\n";
    }

    [[nodiscard]] std::string str() const { return out_ + "</svg>\n"; }

private:
    Vec2 map(Vec2 p) const { return {(p.x - b_.xmin) * scale_, (b_.ymax - p.y) * scale_}; }

    std::string coords(std::span<const Vec2> pts) const {
        std::string s;
        char buf[64];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Vec2 p = map(pts[i]);
            std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", p.x, p.y);
            s += buf;
        }
        return s;
    }

    static std::string attr(const char* name, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " %s=\"%.3g\"", name, v);
        return buf;
    }

    Rect b_;
    double scale_{1.0};
    std::string out_;
};

namespace style {
inline constexpr const char* kObstacle = "#6b6b6b";
inline constexpr const char* kBand = "#f2b872";
inline constexpr const char* kChannel = "#9cc3e6";
inline constexpr const char* kChosen = "#1f5fa8";
inline constexpr const char* kPath = "#d1342b";
inline constexpr const char* kBaseline = "#2b8a3e";
}  // namespace style

/// Strip on the free side of each padded edge, `offset` wide (clipped to the inradius).
[[nodiscard]] inline Polygon band_polygon(const NavMesh& mesh, const EdgeOffset& e) {
    const Vec2 a = mesh.vertices[static_cast<std::size_t>(e.v0)];
    const Vec2 b = mesh.vertices[static_cast<std::size_t>(e.v1)];
    const Vec2 d = normalized(b - a);
    const Vec2 left{-d.y, d.x};
    const double w = e.clamped_offset();
    return {a, b, b + left * w, a + left * w};
}

inline void draw_obstacles(Svg& svg, const Environment& env) {
    for (const auto& poly : env.obstacles) svg.polygon(poly, style::kObstacle, "#333333", 0.8);
}

inline void draw_markers(Svg& svg, Vec2 start, Vec2 goal) {
    svg.circle(start, 5.0, "#2b8a3e");
    svg.circle(goal, 5.0, "#d1342b");
}

/// Plan figure: obstacles, padded bands, every channel, the chosen channel and path.
[[nodiscard]] inline std::string plan_svg(const PlanResult& r, const Environment& env) {
    Svg svg(env.bounds);
    for (std::size_t i = 0; i < r.channels.size(); ++i) {
        const bool chosen = static_cast<int>(i) == r.chosen;
        if (chosen) continue;
        for (const int t : r.channels[i].channel.triangles)
            svg.polygon(r.mesh.triangle_polygon(t), style::kChannel, style::kChannel, 0.5, 0.25);
    }
    if (r.chosen >= 0)
        for (const int t : r.chosen_channel().channel.triangles)
            svg.polygon(r.mesh.triangle_polygon(t), style::kChosen, style::kChosen, 0.5, 0.25);
    for (const auto& c : r.channels)
        for (const auto& e : c.padding.edges)
            if (e.offset > 0.0) svg.polygon(band_polygon(r.mesh, e), style::kBand, "none", 0.0, 0.6);
    draw_obstacles(svg, env);
    if (r.chosen >= 0) {
        svg.polyline(fillet_overlay(r.chosen_path.waypoints, env.vehicle.turn_radius()), style::kPath, 2.0);
        svg.polyline(r.chosen_path.waypoints, style::kPath, 0.8, "4 3");
    }
    draw_markers(svg, r.start, r.goal);
    return svg.str();
}

/// Comparison figure: RENEW path against the smoothed baseline path.
[[nodiscard]] inline std::string compare_svg(const Environment& env, Vec2 start, Vec2 goal, const Polyline* renew,
                                             const Polyline* baseline) {
    Svg svg(env.bounds);
    draw_obstacles(svg, env);
    if (baseline) svg.polyline(*baseline, style::kBaseline, 2.0, "6 3");
    if (renew) svg.polyline(*renew, style::kPath, 2.0);
    draw_markers(svg, start, goal);
    return svg.str();
}

/// Contingency overlay: path and a dot at every collision station.
[[nodiscard]] inline std::string contingency_svg(const Environment& env, std::span<const Vec2> path,
                                                 const ContingencyReport& rep) {
    Svg svg(env.bounds);
    draw_obstacles(svg, env);
    svg.polyline(path, style::kPath, 2.0);
    for (const auto* s : rep.collision_sites()) svg.circle(s->position, 4.0, "#000000");
    return svg.str();
}

/// Mesh debug figure: every triangle, obstacle triangles filled, constrained edges bold.
[[nodiscard]] inline std::string mesh_svg(const NavMesh& mesh, const Environment& env) {
    Svg svg(env.bounds);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const bool free = mesh.is_free(static_cast<int>(t));
        svg.polygon(mesh.triangle_polygon(static_cast<int>(t)), free ? "none" : style::kObstacle, "#7a7a7a", 0.5);
    }
    for (const auto& [a, b] : mesh.constrained_edges) {
        const Vec2 seg[2]{mesh.vertices[static_cast<std::size_t>(a)], mesh.vertices[static_cast<std::size_t>(b)]};
        svg.polyline(seg, "#000000", 2.5);
    }
    return svg.str();
}

}  // namespace renew::io
