#pragma once

// Per-channel padding of constrained edges. The adaptive scheme samples best-effort
// hard-over turns entering each edge and pads by the sigma-quantile of how deep they
// encroach past it; fixed and zero schemes exist for ablations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "renew/dynamics.hpp"
#include "renew/env.hpp"
#include "renew/homotopy.hpp"
#include "renew/mesh.hpp"
#include "renew/stats.hpp"

namespace renew {

struct PaddingScheme {
    enum class Kind { Adaptive, Fixed, None };
    Kind kind{Kind::Adaptive};
    double distance{0.0};  ///< Fixed only

    /// "adaptive", "none" or "fixed:<d>".
    static PaddingScheme parse(const std::string& text) {
        if (text == "adaptive") return {Kind::Adaptive, 0.0};
        if (text == "none") return {Kind::None, 0.0};
        if (text.rfind("fixed:", 0) == 0) {
            double d = 0.0;
            std::size_t used = 0;
            try {
                d = std::stod(text.substr(6), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != text.size() - 6 || !(d >= 0.0) || !std::isfinite(d))
                fail("padding scheme '" + text + "': fixed distance must be a number >= 0");
            return {Kind::Fixed, d};
        }
        fail("unknown padding scheme '" + text + "' (expected adaptive, none or fixed:<d>)");
    }

    [[nodiscard]] std::string to_string() const {
        switch (kind) {
            case Kind::Adaptive: return "adaptive";
            case Kind::None: return "none";
            case Kind::Fixed: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "fixed:%g", distance);
                return buf;
            }
        }
        return "adaptive";
    }
};

struct PaddingConfig {
    double sigma{0.95};
    int n_samples{500};
    BestEffortConfig best_effort{};
    /// Also pad the world-rectangle edges.
    bool pad_bounds{true};
};

struct EdgeOffset {
    int edge_id{-1};     ///< index into NavMesh::constrained_edges
    int v0{-1}, v1{-1};  ///< oriented so the free side is on the left of v0 -> v1
    int triangle{-1};    ///< channel triangle supplying local current statistics and heading
    double heading{0.0};
    double offset{0.0};
    double inradius{0.0};  ///< of the free triangle bounded by the edge
    bool clamped{false};   ///< offset exceeds the inradius

    [[nodiscard]] double clamped_offset() const noexcept { return std::min(offset, inradius); }
};

struct PaddingReport {
    int channel_id{-1};
    PaddingScheme scheme;
    double sigma{0.95};
    int n_samples{0};
    std::vector<EdgeOffset> edges;  ///< ascending edge_id
    bool feasible{true};
    std::vector<Segment> padded_passing_edges;
    std::vector<double> usable_lengths;
    int blocked_passing_edge{-1};

    [[nodiscard]] const EdgeOffset* find(int edge_id) const noexcept {
        const auto it = std::lower_bound(edges.begin(), edges.end(), edge_id,
                                         [](const EdgeOffset& e, int id) { return e.edge_id < id; });
        return (it != edges.end() && it->edge_id == edge_id) ? &*it : nullptr;
    }
    [[nodiscard]] double offset_of(int edge_id) const noexcept {
        const auto* e = find(edge_id);
        return e ? e->offset : 0.0;
    }
    [[nodiscard]] bool any_clamped() const noexcept {
        return std::any_of(edges.begin(), edges.end(), [](const EdgeOffset& e) { return e.clamped; });
    }
};

/// A segment the planner must keep `offset` away from.
struct BandConstraint {
    Segment edge;
    double offset{0.0};
};

namespace detail {

// Free triangle and local edge index holding each constrained edge, or (-1, -1) when both
// sides are holes.
inline std::vector<std::pair<int, int>> constrained_edge_owners(const NavMesh& mesh) {
    std::vector<std::pair<int, int>> owner(mesh.constrained_edges.size(), {-1, -1});
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
        if (!mesh.is_free(t)) continue;
        for (int i = 0; i < 3; ++i) {
            if (!mesh.constrained[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
            const auto [a, b] = mesh.edge_vertices(t, i);
            const int id = mesh.constrained_edge_id(a, b);
            if (id >= 0 && owner[static_cast<std::size_t>(id)].first < 0) owner[static_cast<std::size_t>(id)] = {t, i};
        }
    }
    return owner;
}

inline std::vector<std::vector<int>> incident_constrained_edges(const NavMesh& mesh) {
    std::vector<std::vector<int>> inc(mesh.vertices.size());
    for (int id = 0; id < static_cast<int>(mesh.constrained_edges.size()); ++id) {
        const auto [a, b] = mesh.constrained_edges[static_cast<std::size_t>(id)];
        inc[static_cast<std::size_t>(a)].push_back(id);
        inc[static_cast<std::size_t>(b)].push_back(id);
    }
    return inc;
}

// Travel direction through channel triangle `pos`: from where the midline enters it to
// where it leaves.
inline double channel_heading(const Channel& channel, std::size_t pos, Vec2 start, Vec2 goal) {
    const Vec2 in = pos == 0 ? start : channel.passing_edges[pos - 1].midpoint();
    const Vec2 out = pos + 1 == channel.triangles.size() ? goal : channel.passing_edges[pos].midpoint();
    const Vec2 d = out - in;
    if (norm(d) <= 0.0) {
        const Vec2 g = goal - start;
        return norm(g) > 0.0 ? std::atan2(g.y, g.x) : 0.0;
    }
    return std::atan2(d.y, d.x);
}

inline std::uint64_t double_bits(double x) noexcept {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

}  // namespace detail

/// Constrained edges a channel must respect, each paired with the channel triangle
/// that governs it: edges of channel triangles first (by channel order), then edges
/// meeting a channel triangle's vertices. Edges lacking a free side are skipped.
struct RelevantEdge {
    int edge_id;
    std::size_t position;  ///< index into channel.triangles
    int free_triangle;
    int free_local;
};

[[nodiscard]] inline std::vector<RelevantEdge> relevant_edges(const Channel& channel, const NavMesh& mesh,
                                                              bool pad_bounds = true) {
    const auto owners = detail::constrained_edge_owners(mesh);
    const auto incident = detail::incident_constrained_edges(mesh);
    std::map<int, RelevantEdge> chosen;
    auto consider = [&](int id, std::size_t pos) {
        if (id < 0 || chosen.contains(id)) return;
        const auto [ft, fl] = owners[static_cast<std::size_t>(id)];
        if (ft < 0) return;
        const auto [a, b] = mesh.constrained_edges[static_cast<std::size_t>(id)];
        if (!pad_bounds && mesh.is_bounds_edge(a, b)) return;
        chosen.emplace(id, RelevantEdge{id, pos, ft, fl});
    };
    for (std::size_t pos = 0; pos < channel.triangles.size(); ++pos) {
        const int t = channel.triangles[pos];
        for (int i = 0; i < 3; ++i) {
            if (!mesh.constrained[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
            const auto [a, b] = mesh.edge_vertices(t, i);
            consider(mesh.constrained_edge_id(a, b), pos);
        }
    }
    for (std::size_t pos = 0; pos < channel.triangles.size(); ++pos) {
        const auto& tri = mesh.triangles[static_cast<std::size_t>(channel.triangles[pos])];
        for (const int v : tri)
            for (const int id : incident[static_cast<std::size_t>(v)]) consider(id, pos);
    }
    std::vector<RelevantEdge> out;
    out.reserve(chosen.size());
    for (const auto& [id, e] : chosen) out.push_back(e);
    return out;
}

/// Memo of adaptive offsets keyed by (edge, triangle, heading); channels sharing a
/// triangle and direction reuse the same sample set.
class PaddingCache {
public:
    std::optional<double> get(int edge, int tri, double heading) const {
        const auto it = memo_.find({edge, tri, detail::double_bits(heading)});
        if (it == memo_.end()) return std::nullopt;
        return it->second;
    }
    void put(int edge, int tri, double heading, double offset) { memo_[{edge, tri, detail::double_bits(heading)}] = offset; }
    [[nodiscard]] std::size_t size() const noexcept { return memo_.size(); }

private:
    std::map<std::tuple<int, int, std::uint64_t>, double> memo_;
};

/// Half-length added at each end of an edge while sampling, so finite edge length never
/// hides an encroachment.
[[nodiscard]] inline double sampling_extension(const CurrentField& field, const VehicleModel& vehicle) {
    return 4.0 * vehicle.turn_radius() + 2.0 * hard_over_horizon(vehicle) * field.max_magnitude() + 10.0;
}

/// Encroachment depths (>= 0) of best-effort hard-over turns entering at the midpoint of
/// the oriented edge a -> b (free side on the left).
[[nodiscard]] inline std::vector<double> encroachment_samples(const Segment& edge, std::span<const Vec2> entry_region,
                                                              double heading, const CurrentField& field,
                                                              const VehicleModel& vehicle, int n_samples,
                                                              const BestEffortConfig& cfg) {
    const Vec2 dir = normalized(edge.b - edge.a);
    const double ext = sampling_extension(field, vehicle);
    const Segment extended{edge.a - dir * ext, edge.b + dir * ext};
    auto d = best_effort_distance_samples(entry_region, edge.midpoint(), heading, field, vehicle, extended, n_samples, cfg);
    for (double& v : d) v = std::max(0.0, -v);
    return d;
}

/// Per-edge seed: reproducible and independent across (edge, triangle, heading).
[[nodiscard]] inline std::uint64_t edge_seed(std::uint64_t seed, int edge, int tri, double heading) noexcept {
    return mix_seed(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(edge)), static_cast<std::uint64_t>(tri)),
                    detail::double_bits(heading));
}

namespace detail {

inline EdgeOffset make_edge_offset(const RelevantEdge& r, const Channel& channel, const NavMesh& mesh, Vec2 start,
                                   Vec2 goal) {
    EdgeOffset e;
    e.edge_id = r.edge_id;
    std::tie(e.v0, e.v1) = mesh.edge_vertices(r.free_triangle, r.free_local);
    e.triangle = channel.triangles[r.position];
    e.heading = channel_heading(channel, r.position, start, goal);
    e.inradius = triangle_inradius(mesh.corner(r.free_triangle, 0), mesh.corner(r.free_triangle, 1),
                                   mesh.corner(r.free_triangle, 2));
    return e;
}

inline Segment oriented_segment(const NavMesh& mesh, const EdgeOffset& e) {
    return {mesh.vertices[static_cast<std::size_t>(e.v0)], mesh.vertices[static_cast<std::size_t>(e.v1)]};
}

}  // namespace detail

/// Adaptive padding of every constrained edge relevant to `channel`. The report's
/// feasibility fields are filled by apply_padding.
[[nodiscard]] inline PaddingReport compute_adaptive_padding(const Channel& channel, const NavMesh& mesh,
                                                            const Environment& env, const VehicleModel& vehicle,
                                                            Vec2 start, Vec2 goal, const PaddingConfig& cfg = {},
                                                            PaddingCache* cache = nullptr) {
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) fail("padding: sigma must lie in (0, 1)");
    if (cfg.n_samples < 1) fail("padding: n_samples must be >= 1");
    PaddingReport rep;
    rep.channel_id = channel.id;
    rep.scheme = {PaddingScheme::Kind::Adaptive, 0.0};
    rep.sigma = cfg.sigma;
    rep.n_samples = cfg.n_samples;
    for (const auto& r : relevant_edges(channel, mesh, cfg.pad_bounds)) {
        EdgeOffset e = detail::make_edge_offset(r, channel, mesh, start, goal);
        std::optional<double> memo = cache ? cache->get(e.edge_id, e.triangle, e.heading) : std::nullopt;
        if (memo) {
            e.offset = *memo;
        } else {
            BestEffortConfig be = cfg.best_effort;
            be.seed = edge_seed(cfg.best_effort.seed, e.edge_id, e.triangle, e.heading);
            const Polygon region = mesh.triangle_polygon(e.triangle);
            e.offset = quantile(encroachment_samples(detail::oriented_segment(mesh, e), region, e.heading, env.field,
                                                     vehicle, cfg.n_samples, be),
                                cfg.sigma);
            if (cache) cache->put(e.edge_id, e.triangle, e.heading, e.offset);
        }
        e.clamped = e.offset > e.inradius;
        rep.edges.push_back(e);
    }
    return rep;
}

/// Uniform offset `d` on every constrained edge relevant to the channel.
[[nodiscard]] inline PaddingReport fixed_padding(const Channel& channel, const NavMesh& mesh, double d, Vec2 start,
                                                 Vec2 goal, bool pad_bounds = true) {
    if (!(d >= 0.0)) fail("fixed padding distance must be >= 0");
    PaddingReport rep;
    rep.channel_id = channel.id;
    rep.scheme = d > 0.0 ? PaddingScheme{PaddingScheme::Kind::Fixed, d} : PaddingScheme{PaddingScheme::Kind::None, 0.0};
    rep.sigma = 0.0;
    for (const auto& r : relevant_edges(channel, mesh, pad_bounds)) {
        EdgeOffset e = detail::make_edge_offset(r, channel, mesh, start, goal);
        e.offset = d;
        e.clamped = d > e.inradius;
        rep.edges.push_back(e);
    }
    return rep;
}

[[nodiscard]] inline PaddingReport no_padding(const Channel& channel, const NavMesh& mesh, Vec2 start, Vec2 goal) {
    return fixed_padding(channel, mesh, 0.0, start, goal);
}

/// Dispatches on the scheme.
[[nodiscard]] inline PaddingReport compute_padding(const PaddingScheme& scheme, const Channel& channel,
                                                   const NavMesh& mesh, const Environment& env,
                                                   const VehicleModel& vehicle, Vec2 start, Vec2 goal,
                                                   const PaddingConfig& cfg = {}, PaddingCache* cache = nullptr) {
    switch (scheme.kind) {
        case PaddingScheme::Kind::Adaptive:
            return compute_adaptive_padding(channel, mesh, env, vehicle, start, goal, cfg, cache);
        case PaddingScheme::Kind::Fixed: return fixed_padding(channel, mesh, scheme.distance, start, goal, cfg.pad_bounds);
        case PaddingScheme::Kind::None: return no_padding(channel, mesh, start, goal);
    }
    return no_padding(channel, mesh, start, goal);
}

namespace detail {

// Parameter interval of `e` lying within distance d of `s`; distance along e is convex.
inline std::optional<std::pair<double, double>> near_interval(const Segment& e, const Segment& s, double d) {
    if (!(d > 0.0)) return std::nullopt;
    auto f = [&](double t) { return point_segment_distance(e.at(t), s); };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2)) hi = m2;
        else lo = m1;
    }
    const double tmin = 0.5 * (lo + hi);
    if (f(tmin) >= d) return std::nullopt;
    auto crossing = [&](double inside, double outside) {
        for (int it = 0; it < 100 && std::abs(outside - inside) > 1e-13; ++it) {
            const double m = 0.5 * (inside + outside);
            (f(m) < d ? inside : outside) = m;
        }
        return outside;
    };
    const double a = f(0.0) < d ? 0.0 : crossing(tmin, 0.0);
    const double b = f(1.0) < d ? 1.0 : crossing(tmin, 1.0);
    return std::pair{a, b};
}

}  // namespace detail

/// Largest sub-interval of `edge` keeping at least the padding offset from every
/// constraint, as a segment (zero length when nothing remains).
[[nodiscard]] inline Segment trim_passing_edge(const Segment& edge, std::span<const BandConstraint> constraints) {
    std::vector<std::pair<double, double>> cut;
    for (const auto& c : constraints)
        if (auto iv = detail::near_interval(edge, c.edge, c.offset)) cut.push_back(*iv);
    std::sort(cut.begin(), cut.end());
    double best_lo = 0.0, best_hi = 0.0, cursor = 0.0;
    for (const auto& [a, b] : cut) {
        if (a > cursor && a - cursor > best_hi - best_lo) {
            best_lo = cursor;
            best_hi = a;
        }
        cursor = std::max(cursor, b);
    }
    if (cursor < 1.0 && 1.0 - cursor > best_hi - best_lo) {
        best_lo = cursor;
        best_hi = 1.0;
    }
    if (best_hi <= best_lo) return {edge.midpoint(), edge.midpoint()};
    return {edge.at(best_lo), edge.at(best_hi)};
}

/// Padded edges within reach of triangle `tri`: its own constrained edges and those
/// meeting its vertices.
[[nodiscard]] inline std::vector<BandConstraint> triangle_band(const PaddingReport& report, const NavMesh& mesh, int tri) {
    const auto& v = mesh.triangles[static_cast<std::size_t>(tri)];
    std::vector<BandConstraint> out;
    for (const auto& e : report.edges) {
        const bool touches = std::find(v.begin(), v.end(), e.v0) != v.end() || std::find(v.begin(), v.end(), e.v1) != v.end();
        if (touches && e.offset > 0.0) out.push_back({detail::oriented_segment(mesh, e), e.offset});
    }
    return out;
}

/// Geometry of a channel after padding.
struct PaddedChannel {
    int channel_id{-1};
    bool feasible{true};
    std::vector<Segment> passing_edges;  ///< trimmed
    std::vector<double> usable_lengths;
    int blocked_passing_edge{-1};
    /// Per channel triangle, the padded edges that segments inside it must clear.
    std::vector<std::vector<BandConstraint>> bands;
};

/// Trims every passing edge by the offsets of the padded edges around it. The channel
/// is infeasible when a trimmed passing edge is no longer than the vehicle.
[[nodiscard]] inline PaddedChannel apply_padding(const Channel& channel, const PaddingReport& report,
                                                 const NavMesh& mesh, const VehicleModel& vehicle) {
    PaddedChannel pc;
    pc.channel_id = channel.id;
    for (const int t : channel.triangles) pc.bands.push_back(triangle_band(report, mesh, t));
    for (std::size_t j = 0; j < channel.passing_edges.size(); ++j) {
        std::vector<BandConstraint> around = pc.bands[j];
        for (const auto& c : pc.bands[j + 1])
            if (std::none_of(around.begin(), around.end(),
                             [&](const BandConstraint& b) { return b.edge.a == c.edge.a && b.edge.b == c.edge.b; }))
                around.push_back(c);
        const Segment trimmed = trim_passing_edge(channel.passing_edges[j], around);
        pc.passing_edges.push_back(trimmed);
        pc.usable_lengths.push_back(trimmed.length());
        if (pc.feasible && trimmed.length() <= vehicle.length) {
            pc.feasible = false;
            pc.blocked_passing_edge = static_cast<int>(j);
        }
    }
    return pc;
}

/// Copies the padded geometry into the report.
inline void record_padding(PaddingReport& report, const PaddedChannel& padded) {
    report.feasible = padded.feasible;
    report.padded_passing_edges = padded.passing_edges;
    report.usable_lengths = padded.usable_lengths;
    report.blocked_passing_edge = padded.blocked_passing_edge;
}

/// Fraction of fresh best-effort turns that cross `e` when entering at its padding
/// offset from the edge.
[[nodiscard]] inline double encroachment_frequency(const EdgeOffset& e, const NavMesh& mesh, const CurrentField& field,
                                                   const VehicleModel& vehicle, int n, std::uint64_t seed,
                                                   const BestEffortConfig& base = {}) {
    const Segment edge = detail::oriented_segment(mesh, e);
    const Vec2 dir = normalized(edge.b - edge.a);
    const Vec2 left{-dir.y, dir.x};
    const double ext = sampling_extension(field, vehicle);
    const Segment extended{edge.a - dir * ext, edge.b + dir * ext};
    BestEffortConfig cfg = base;
    cfg.seed = seed;
    const Polygon region = mesh.triangle_polygon(e.triangle);
    const auto d =
        best_effort_distance_samples(region, edge.midpoint() + left * e.offset, e.heading, field, vehicle, extended, n, cfg);
    const auto hits = std::count_if(d.begin(), d.end(), [](double v) { return v < 0.0; });
    return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace renew
