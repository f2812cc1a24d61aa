#pragma once

// Channel-level and path-level planning: sample waypoint paths on trimmed passing edges,
// screen them with the effective turning radius, score them by the fuel integral, choose
// the channel with the lowest harmonic-mean fuel and the cheapest path inside it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "renew/dynamics.hpp"
#include "renew/env.hpp"
#include "renew/homotopy.hpp"
#include "renew/mesh.hpp"
#include "renew/padding.hpp"
#include "renew/stats.hpp"

namespace renew {

struct CandidatePath {
    int channel_id{-1};
    int index{0};  ///< sample index within its channel
    Polyline waypoints;
    double fuel{0.0};
    double length{0.0};
    bool feasible{true};
    bool turn_ok{true};
    bool band_ok{true};
};

struct FuelModel {
    double alpha{1.0};
    double k_exp{2.0};
};

/// Integration step for fuel quadrature on a field.
[[nodiscard]] inline double fuel_step(const CurrentField& field) { return std::min(field.spacing() / 4.0, 0.5); }

/// alpha * v^k / (v + c . T) integrated along the polyline with composite Simpson's rule.
/// Throws Error(AssumptionViolated) if the ground speed along the path reaches zero.
template <CurrentSource F>
[[nodiscard]] double fuel_cost(std::span<const Vec2> path, const F& field, const VehicleModel& vehicle,
                               const FuelModel& model, double max_step) {
    if (!(max_step > 0.0)) fail("fuel_cost: step must be > 0");
    const double v = vehicle.v_thrust;
    const double num = model.alpha * std::pow(v, model.k_exp);
    double total = 0.0, s0 = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Vec2 a = path[i - 1], b = path[i];
        const double len = distance(a, b);
        if (len <= 0.0) continue;
        const Vec2 tangent = (b - a) / len;
        auto integrand = [&](double t) {
            const double denom = v + dot(field.sample(lerp(a, b, t)), tangent);
            if (!(denom > 0.0)) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "assumption violated at s = %.3f m (ground speed %.3g)", s0 + t * len, denom);
                throw Error(ErrorKind::AssumptionViolated, buf);
            }
            return num / denom;
        };
        auto m = static_cast<std::size_t>(std::ceil(len / max_step - 1e-9));
        m = std::max<std::size_t>(2, m + (m % 2));
        const double h = 1.0 / static_cast<double>(m);
        double sum = integrand(0.0) + integrand(1.0);
        for (std::size_t j = 1; j < m; ++j) sum += (j % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(j) * h);
        total += sum * h / 3.0 * len;
        s0 += len;
    }
    return total;
}

[[nodiscard]] inline double fuel_cost(std::span<const Vec2> path, const CurrentField& field, const VehicleModel& vehicle,
                                      const FuelModel& model = {}) {
    return fuel_cost(path, field, vehicle, model, fuel_step(field));
}

/// Can the vehicle round the corner prev -> cur -> next? The effective radius uses the
/// ground speed with the mean current around `cur`, taking the faster of the two legs.
[[nodiscard]] inline bool check_turn_feasibility(Vec2 prev, Vec2 cur, Vec2 next, const CurrentField& field,
                                                 const VehicleModel& vehicle, double region_radius) {
    const double l_in = distance(prev, cur), l_out = distance(cur, next);
    if (l_in <= 0.0 || l_out <= 0.0) return true;
    const Vec2 d_in = (cur - prev) / l_in, d_out = (next - cur) / l_out;
    const double delta = std::acos(std::clamp(dot(d_in, d_out), -1.0, 1.0));
    if (delta <= 0.0) return true;
    const Vec2 c = mean_current_in_disc(field, cur, region_radius);
    const double v_eff = std::max(norm(d_in * vehicle.v_thrust + c), norm(d_out * vehicle.v_thrust + c));
    const double need = v_eff / vehicle.omega_max * std::tan(0.5 * delta);
    return l_in >= need && l_out >= need;
}

/// Segment i of a candidate (waypoint i to i + 1) runs through channel triangle i and must
/// keep every padded edge of that triangle at its offset. The start and goal legs are only
/// held to it at their channel-side endpoint.
[[nodiscard]] inline bool band_clear(std::span<const Vec2> waypoints, const PaddedChannel& padded, double tol = 1e-9) {
    const std::size_t segs = waypoints.size() - 1;
    for (std::size_t i = 0; i < segs && segs > 1; ++i) {
        const Segment s{waypoints[i], waypoints[i + 1]};
        for (const auto& c : padded.bands[i]) {
            double d;
            if (i == 0) d = point_segment_distance(s.b, c.edge);
            else if (i + 1 == segs) d = point_segment_distance(s.a, c.edge);
            else d = segment_segment_distance(s, c.edge);
            if (d < c.offset - tol) return false;
        }
    }
    return true;
}

/// N paths with one waypoint drawn uniformly on each trimmed passing edge. Infeasible
/// paths are kept and flagged.
[[nodiscard]] inline std::vector<CandidatePath> sample_paths(const PaddedChannel& padded, Vec2 start, Vec2 goal, int n,
                                                             const CurrentField& field, const VehicleModel& vehicle,
                                                             double region_radius, std::uint64_t seed) {
    if (!padded.feasible) fail("sample_paths: channel " + std::to_string(padded.channel_id) + " is blocked by padding");
    if (n < 1) fail("sample_paths: N must be >= 1");
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(padded.channel_id)));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<CandidatePath> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        CandidatePath p;
        p.channel_id = padded.channel_id;
        p.index = i;
        p.waypoints.reserve(padded.passing_edges.size() + 2);
        p.waypoints.push_back(start);
        for (const auto& e : padded.passing_edges) p.waypoints.push_back(e.at(u01(rng)));
        p.waypoints.push_back(goal);
        for (std::size_t w = 1; w + 1 < p.waypoints.size() && p.turn_ok; ++w)
            p.turn_ok = check_turn_feasibility(p.waypoints[w - 1], p.waypoints[w], p.waypoints[w + 1], field, vehicle,
                                               region_radius);
        p.band_ok = band_clear(p.waypoints, padded);
        p.feasible = p.turn_ok && p.band_ok;
        p.length = polyline_length(p.waypoints);
        out.push_back(std::move(p));
    }
    return out;
}

/// Harmonic mean of the feasible fuels, or nullopt when none is feasible.
[[nodiscard]] inline std::optional<double> channel_score(std::span<const CandidatePath> paths) {
    std::vector<double> f;
    for (const auto& p : paths)
        if (p.feasible) f.push_back(p.fuel);
    if (f.empty()) return std::nullopt;
    return harmonic_mean(f);
}

/// Index of the group with the lowest harmonic-mean fuel (ties: lower index).
[[nodiscard]] inline std::size_t select_homotopy(std::span<const std::vector<CandidatePath>> groups) {
    std::optional<std::size_t> best;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto s = channel_score(groups[g]);
        if (s && (!best || *s < best_score)) {
            best = g;
            best_score = *s;
        }
    }
    if (!best) throw Error(ErrorKind::NoFeasiblePlan, "no feasible plan");
    return *best;
}

/// Minimum-fuel feasible path; ties go to the shorter, then the lower sample index.
[[nodiscard]] inline const CandidatePath& select_path(std::span<const CandidatePath> paths) {
    const CandidatePath* best = nullptr;
    for (const auto& p : paths) {
        if (!p.feasible) continue;
        if (!best || p.fuel < best->fuel || (p.fuel == best->fuel && (p.length < best->length ||
                                                                      (p.length == best->length && p.index < best->index))))
            best = &p;
    }
    if (!best) throw Error(ErrorKind::NoFeasiblePlan, "no feasible plan: channel has no feasible path");
    return *best;
}

struct PlanConfig {
    int k{16};
    int n_samples{500};
    double sigma{0.95};
    FuelModel fuel{};
    double region_radius{-1.0};  ///< negative: twice the field spacing
    PaddingScheme padding{};
    int padding_samples{500};
    double heading_spread{30.0 * kPi / 180.0};
    bool pad_bounds{true};
    std::uint64_t seed{20240917};
    std::size_t search_budget{kChannelSearchBudget};
};

struct ChannelOutcome {
    Channel channel;
    PaddingReport padding;
    PaddedChannel padded;
    std::vector<CandidatePath> paths;
    std::optional<double> score;
    int feasible_paths{0};
    int turn_rejects{0};
    int band_rejects{0};
};

struct PlanMetrics {
    double fuel{0.0};
    double safety{0.0};  ///< min distance to the original obstacles; inf without obstacles
    double length{0.0};
    double fuel_per_distance{0.0};
    int states{0};  ///< mesh vertices + explored dual nodes
    int mesh_vertices{0};
    int explored_nodes{0};
};

struct PlanResult {
    NavMesh mesh;
    Vec2 start;
    Vec2 goal;
    std::vector<ChannelOutcome> channels;
    int chosen{-1};  ///< index into channels
    CandidatePath chosen_path;
    PlanMetrics metrics;
    int class_budget{0};

    [[nodiscard]] const ChannelOutcome& chosen_channel() const { return channels.at(static_cast<std::size_t>(chosen)); }
};

[[nodiscard]] inline double path_safety(std::span<const Vec2> path, const std::vector<Polygon>& obstacles) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& poly : obstacles) {
        if (path.size() == 1) d = std::min(d, point_in_polygon(path[0], poly) ? 0.0 : point_polygon_boundary_distance(path[0], poly));
        for (std::size_t i = 1; i < path.size(); ++i) d = std::min(d, segment_polygon_distance({path[i - 1], path[i]}, poly));
    }
    return d;
}

[[nodiscard]] inline PlanMetrics path_metrics(std::span<const Vec2> path, double fuel, const Environment& env) {
    PlanMetrics m;
    m.fuel = fuel;
    m.length = polyline_length(path);
    m.fuel_per_distance = m.length > 0.0 ? fuel / m.length : 0.0;
    m.safety = path_safety(path, env.obstacles);
    return m;
}

/// Full pipeline: mesh, dual graph, channels, per-channel padding, sampling and scoring,
/// channel selection, path selection.
[[nodiscard]] inline PlanResult plan(const Environment& env, const VehicleModel& vehicle, Vec2 start, Vec2 goal,
                                     const PlanConfig& cfg = {}) {
    if (cfg.n_samples < 1) fail("plan: N must be >= 1");
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) fail("plan: sigma must lie in (0, 1)");
    PlanResult res;
    res.start = start;
    res.goal = goal;
    res.mesh = build_navmesh(env);
    const DualGraph dual = build_dual(res.mesh);
    const ChannelSet cs = enumerate_channels(dual, res.mesh, start, goal, cfg.k, cfg.search_budget);
    res.class_budget = cs.class_budget;
    const double a = cfg.region_radius >= 0.0 ? cfg.region_radius : 2.0 * env.field.spacing();

    PaddingConfig pcfg;
    pcfg.sigma = cfg.sigma;
    pcfg.n_samples = cfg.padding_samples;
    pcfg.pad_bounds = cfg.pad_bounds;
    pcfg.best_effort.heading_spread = cfg.heading_spread;
    pcfg.best_effort.seed = mix_seed(cfg.seed, 0x9ADu);
    PaddingCache cache;

    std::vector<std::vector<CandidatePath>> groups;
    for (const auto& ch : cs.channels) {
        ChannelOutcome out;
        out.channel = ch;
        out.padding = compute_padding(cfg.padding, ch, res.mesh, env, vehicle, start, goal, pcfg, &cache);
        out.padded = apply_padding(ch, out.padding, res.mesh, vehicle);
        record_padding(out.padding, out.padded);
        if (out.padded.feasible) {
            out.paths = sample_paths(out.padded, start, goal, cfg.n_samples, env.field, vehicle, a, cfg.seed);
            for (auto& p : out.paths) {
                p.fuel = fuel_cost(p.waypoints, env.field, vehicle, cfg.fuel);
                out.feasible_paths += p.feasible;
                out.turn_rejects += !p.turn_ok;
                out.band_rejects += p.turn_ok && !p.band_ok;
            }
            out.score = channel_score(out.paths);
        }
        groups.push_back(out.paths);
        res.channels.push_back(std::move(out));
    }
    if (res.channels.empty()) throw Error(ErrorKind::NoFeasiblePlan, "no feasible plan: start and goal are not connected");
    try {
        res.chosen = static_cast<int>(select_homotopy(groups));
    } catch (const Error&) {
        throw Error(ErrorKind::NoFeasiblePlan, "no feasible plan: all " + std::to_string(res.channels.size()) +
                                                   " channel(s) blocked or without a feasible path");
    }
    res.chosen_path = select_path(res.channels[static_cast<std::size_t>(res.chosen)].paths);
    res.metrics = path_metrics(res.chosen_path.waypoints, res.chosen_path.fuel, env);
    res.metrics.mesh_vertices = static_cast<int>(res.mesh.vertices.size());
    res.metrics.explored_nodes = cs.explored_triangles;
    res.metrics.states = res.metrics.mesh_vertices + res.metrics.explored_nodes;
    return res;
}

/// Circular fillet at each interior corner with the still-water turning radius (capped by
/// half the shorter adjacent leg), for drawing only.
[[nodiscard]] inline Polyline fillet_overlay(std::span<const Vec2> path, double radius, int arc_points = 8) {
    Polyline out;
    if (path.size() < 3) return Polyline(path.begin(), path.end());
    out.push_back(path.front());
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const Vec2 p = path[i - 1], c = path[i], n = path[i + 1];
        const double l1 = distance(p, c), l2 = distance(c, n);
        if (l1 <= 0.0 || l2 <= 0.0) continue;
        const Vec2 d1 = (c - p) / l1, d2 = (n - c) / l2;
        const double delta = std::acos(std::clamp(dot(d1, d2), -1.0, 1.0));
        if (delta < 1e-9 || delta > kPi - 1e-6) {
            out.push_back(c);
            continue;
        }
        const double t = std::min({radius * std::tan(0.5 * delta), 0.5 * l1, 0.5 * l2});
        const double r = t / std::tan(0.5 * delta);
        const Vec2 a = c - d1 * t;
        const double side = cross(d1, d2) > 0.0 ? 1.0 : -1.0;
        const Vec2 center = a + Vec2{-d1.y, d1.x} * (side * r);
        const double th0 = std::atan2(a.y - center.y, a.x - center.x);
        for (int k = 0; k <= arc_points; ++k) out.push_back(center + unit(th0 + side * delta * k / arc_points) * r);
    }
    out.push_back(path.back());
    return out;
}

}  // namespace renew
