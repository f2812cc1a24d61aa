#pragma once

// Topologically distinct channels over the dual graph.
//
// Homotopy classes are told apart with crossing words: every obstacle carries a ray from
// an interior anchor point out to the world boundary, and a path is summarized by the
// reduced sequence of signed ray crossings it makes. Channels are found by breadth-first
// search over (triangle, word) pairs, which yields, for each class, its shortest simple
// triangle sequence, and yields classes in order of that length.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "renew/error.hpp"
#include "renew/geometry.hpp"
#include "renew/mesh.hpp"
#include "renew/predicates.hpp"

namespace renew {

struct AnchorRay {
    Vec2 origin;
    Vec2 direction;
    int obstacle{-1};
};

/// Reduced word over ray symbols: +(i+1) crosses ray i left-to-right (seen looking along
/// the ray), -(i+1) the other way.
struct HomotopySignature {
    std::vector<int> crossings;

    friend bool operator==(const HomotopySignature&, const HomotopySignature&) = default;
    friend auto operator<=>(const HomotopySignature&, const HomotopySignature&) = default;

    [[nodiscard]] bool empty() const noexcept { return crossings.empty(); }

    /// e.g. "r1 r3^-1"; "e" for the empty word.
    [[nodiscard]] std::string to_string() const {
        if (crossings.empty()) return "e";
        std::ostringstream os;
        for (std::size_t i = 0; i < crossings.size(); ++i) {
            if (i) os << ' ';
            os << 'r' << std::abs(crossings[i]) - 1;
            if (crossings[i] < 0) os << "^-1";
        }
        return os.str();
    }
};

/// Appends a symbol, cancelling it against an inverse at the end of the word.
inline void append_reduced(std::vector<int>& word, int symbol) {
    if (!word.empty() && word.back() == -symbol) word.pop_back();
    else word.push_back(symbol);
}

[[nodiscard]] inline HomotopySignature concatenate(const HomotopySignature& a, const HomotopySignature& b) {
    HomotopySignature out = a;
    for (const int s : b.crossings) append_reduced(out.crossings, s);
    return out;
}

namespace detail {

constexpr double kRayPerturbation = 1e-6;

// Rotates the downward ray until it no longer passes exactly through any vertex.
inline Vec2 ray_direction_avoiding(Vec2 origin, std::span<const Vec2> vertices) {
    double angle = -0.5 * kPi;
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Vec2 d = unit(angle);
        bool degenerate = false;
        for (const auto& v : vertices) {
            if (predicates::orient(origin, origin + d, v) == 0 && dot(v - origin, d) > 0.0) {
                degenerate = true;
                break;
            }
        }
        if (!degenerate) return d;
        angle += kRayPerturbation;
    }
    return unit(angle);
}

inline bool ray_side(const AnchorRay& r, Vec2 p) noexcept { return cross(r.direction, p - r.origin) >= 0.0; }

inline void append_segment_crossings(std::vector<int>& word, Vec2 p, Vec2 q, std::span<const AnchorRay> rays) {
    // crossings along a segment are ordered by their position on it
    struct Hit {
        double s;
        int symbol;
    };
    Hit hits[8];
    std::vector<Hit> many;
    std::size_t n = 0;
    const Vec2 pq = q - p;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        const auto& r = rays[i];
        const bool sp = ray_side(r, p);
        const bool sq = ray_side(r, q);
        if (sp == sq) continue;
        const double denom = cross(r.direction, pq);
        if (denom == 0.0) continue;
        const double t = cross(p - r.origin, pq) / denom;
        if (t <= 0.0) continue;
        const double s = cross(p - r.origin, r.direction) / denom;
        const int sym = sq ? static_cast<int>(i) + 1 : -(static_cast<int>(i) + 1);
        if (n < 8) hits[n++] = {s, sym};
        else many.push_back({s, sym});
    }
    if (!many.empty() || n > 1) {
        many.insert(many.begin(), hits, hits + n);
        std::sort(many.begin(), many.end(), [](const Hit& a, const Hit& b) { return a.s < b.s; });
        for (const auto& h : many) append_reduced(word, h.symbol);
    } else if (n == 1) {
        append_reduced(word, hits[0].symbol);
    }
}

}  // namespace detail

/// One ray per obstacle from an interior point of the obstacle, pointing along -y
/// (nudged when it would pass exactly through a vertex).
[[nodiscard]] inline std::vector<AnchorRay> anchor_rays(const std::vector<Polygon>& obstacles) {
    std::vector<Vec2> all;
    for (const auto& p : obstacles) all.insert(all.end(), p.begin(), p.end());
    std::vector<AnchorRay> rays;
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        const Vec2 o = interior_point(obstacles[k]);
        rays.push_back({o, detail::ray_direction_avoiding(o, all), static_cast<int>(k)});
    }
    return rays;
}

/// Same construction anchored at the centroid of each obstacle's largest hole triangle.
[[nodiscard]] inline std::vector<AnchorRay> anchor_rays(const NavMesh& mesh) {
    int n = 0;
    for (const int o : mesh.hole_owner) n = std::max(n, o + 1);
    std::vector<int> best(static_cast<std::size_t>(n), -1);
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
        const int o = mesh.hole_owner[static_cast<std::size_t>(t)];
        if (o < 0) continue;
        auto& b = best[static_cast<std::size_t>(o)];
        if (b < 0 || mesh.area(t) > mesh.area(b)) b = t;
    }
    std::vector<AnchorRay> rays;
    for (int k = 0; k < n; ++k) {
        const int t = best[static_cast<std::size_t>(k)];
        if (t < 0) continue;
        const Vec2 o = mesh.centroid(t);
        rays.push_back({o, detail::ray_direction_avoiding(o, mesh.vertices), k});
    }
    return rays;
}

/// Number of obstacles represented by hole triangles in the mesh.
[[nodiscard]] inline int obstacle_count(const NavMesh& mesh) {
    int n = 0;
    for (const int o : mesh.hole_owner) n = std::max(n, o + 1);
    return n;
}

[[nodiscard]] inline HomotopySignature path_signature(std::span<const Vec2> path, std::span<const AnchorRay> rays) {
    HomotopySignature sig;
    for (std::size_t i = 1; i < path.size(); ++i) detail::append_segment_crossings(sig.crossings, path[i - 1], path[i], rays);
    return sig;
}

[[nodiscard]] inline HomotopySignature path_signature(std::span<const Vec2> path, const std::vector<Polygon>& obstacles) {
    const auto rays = anchor_rays(obstacles);
    return path_signature(path, rays);
}

struct Channel {
    int id{-1};
    std::vector<int> triangles;  ///< start triangle first, goal triangle last
    std::vector<int> dual_edges;
    std::vector<Segment> passing_edges;
    std::vector<std::pair<int, int>> passing_vertices;  ///< mesh vertex ids of each passing edge
    HomotopySignature signature;

    /// start, passing-edge midpoints, goal.
    [[nodiscard]] Polyline midline(Vec2 start, Vec2 goal) const {
        Polyline p{start};
        for (const auto& e : passing_edges) p.push_back(e.midpoint());
        p.push_back(goal);
        return p;
    }
};

struct ChannelSet {
    std::vector<Channel> channels;
    std::vector<AnchorRay> rays;
    int explored_triangles{0};  ///< distinct dual nodes reached by the search
    std::size_t search_states{0};
    int class_budget{0};        ///< min(k, 2^n)
};

namespace detail {

struct WordHash {
    std::size_t operator()(const std::pair<int, std::vector<int>>& s) const noexcept {
        std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(s.first);
        for (const int v : s.second) h = (h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(v))) * 1099511628211ull;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

/// Default cap on (triangle, word) search states.
inline constexpr std::size_t kChannelSearchBudget = 400000;

/// Up to k channels with pairwise distinct signatures, shortest triangle sequences first
/// (ties: lexicographically smaller id sequence). The class budget never exceeds 2^n for
/// n obstacles. Throws Error(BadInput) when start or goal is not in a free triangle.
[[nodiscard]] inline ChannelSet enumerate_channels(const DualGraph& graph, const NavMesh& mesh, Vec2 start, Vec2 goal,
                                                   int k, std::size_t state_budget = kChannelSearchBudget) {
    if (k < 1) fail("enumerate_channels: k must be >= 1");
    const auto st = locate_triangle(mesh, start);
    if (!st) fail("start lies inside an obstacle or outside bounds");
    const auto gt = locate_triangle(mesh, goal);
    if (!gt) fail("goal lies inside an obstacle or outside bounds");

    ChannelSet out;
    out.rays = anchor_rays(mesh);
    const int n = obstacle_count(mesh);
    const long long cap = n >= 62 ? (1ll << 62) : (1ll << n);
    out.class_budget = static_cast<int>(std::min<long long>(k, cap));

    struct Node {
        int tri;
        int parent;
        int via_edge;
        std::vector<int> word;
    };
    std::vector<Node> nodes;
    std::unordered_set<std::pair<int, std::vector<int>>, detail::WordHash> visited;
    std::unordered_set<int> reached_tris;
    std::vector<HomotopySignature> found;

    auto on_path = [&nodes](int idx, int tri) {
        for (int i = idx; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
            if (nodes[static_cast<std::size_t>(i)].tri == tri) return true;
        return false;
    };

    {
        std::vector<int> w;
        detail::append_segment_crossings(w, start, mesh.centroid(*st), out.rays);
        visited.insert({*st, w});
        reached_tris.insert(*st);
        nodes.push_back({*st, -1, -1, std::move(w)});
    }
    std::deque<int> queue{0};
    while (!queue.empty() && static_cast<int>(out.channels.size()) < out.class_budget) {
        const int idx = queue.front();
        queue.pop_front();
        const int tri = nodes[static_cast<std::size_t>(idx)].tri;
        if (tri == *gt) {
            std::vector<int> w = nodes[static_cast<std::size_t>(idx)].word;
            detail::append_segment_crossings(w, mesh.centroid(tri), goal, out.rays);
            HomotopySignature sig{std::move(w)};
            if (std::find(found.begin(), found.end(), sig) != found.end()) continue;
            found.push_back(sig);
            Channel ch;
            ch.id = static_cast<int>(out.channels.size());
            for (int i = idx; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) {
                ch.triangles.push_back(nodes[static_cast<std::size_t>(i)].tri);
                if (nodes[static_cast<std::size_t>(i)].via_edge >= 0) ch.dual_edges.push_back(nodes[static_cast<std::size_t>(i)].via_edge);
            }
            std::reverse(ch.triangles.begin(), ch.triangles.end());
            std::reverse(ch.dual_edges.begin(), ch.dual_edges.end());
            for (const int e : ch.dual_edges) {
                const auto& de = graph.edges[static_cast<std::size_t>(e)];
                ch.passing_edges.push_back(de.passing);
                ch.passing_vertices.emplace_back(de.vertex_a, de.vertex_b);
            }
            ch.signature = path_signature(ch.midline(start, goal), out.rays);
            out.channels.push_back(std::move(ch));
            continue;  // a simple channel cannot pass through its goal triangle twice
        }
        if (nodes.size() >= state_budget) continue;
        const Vec2 c = mesh.centroid(tri);
        for (const auto& [nb, e] : graph.adjacency[static_cast<std::size_t>(tri)]) {
            if (on_path(idx, nb)) continue;
            std::vector<int> w = nodes[static_cast<std::size_t>(idx)].word;
            const Vec2 m = graph.edges[static_cast<std::size_t>(e)].passing.midpoint();
            detail::append_segment_crossings(w, c, m, out.rays);
            detail::append_segment_crossings(w, m, mesh.centroid(nb), out.rays);
            if (!visited.insert({nb, w}).second) continue;
            reached_tris.insert(nb);
            nodes.push_back({nb, idx, e, std::move(w)});
            queue.push_back(static_cast<int>(nodes.size() - 1));
        }
    }
    out.explored_triangles = static_cast<int>(reached_tris.size());
    out.search_states = nodes.size();
    return out;
}

namespace detail {

// Parameter interval of segment p->q inside a closed triangle (Cyrus-Beck clipping).
inline std::optional<std::pair<double, double>> clip_to_triangle(Vec2 p, Vec2 q, const std::array<Vec2, 3>& tri,
                                                                 double tol) {
    double lo = 0.0, hi = 1.0;
    const Vec2 d = q - p;
    for (int i = 0; i < 3; ++i) {
        const Vec2 a = tri[static_cast<std::size_t>(i)];
        const Vec2 b = tri[static_cast<std::size_t>((i + 1) % 3)];
        const Vec2 e = b - a;
        const double len = norm(e);
        // inside when cross(e, x - a) / len >= -tol
        const double f0 = cross(e, p - a) / len + tol;
        const double df = cross(e, d) / len;
        if (df == 0.0) {
            if (f0 < 0.0) return std::nullopt;
            continue;
        }
        const double t = -f0 / df;
        if (df > 0.0) lo = std::max(lo, t);
        else hi = std::min(hi, t);
        if (lo > hi) return std::nullopt;
    }
    return std::pair{lo, hi};
}

}  // namespace detail

/// True iff every point of the polyline lies in the closed union of the channel's
/// triangles.
[[nodiscard]] inline bool channel_contains(const Channel& channel, const NavMesh& mesh, std::span<const Vec2> path,
                                           double tol = 1e-9) {
    auto tri_of = [&mesh](int t) { return std::array<Vec2, 3>{mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2)}; };
    if (path.size() == 1) {
        for (const int t : channel.triangles)
            if (detail::clip_to_triangle(path[0], path[0], tri_of(t), tol)) return true;
        return false;
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        std::vector<std::pair<double, double>> cover;
        for (const int t : channel.triangles)
            if (auto iv = detail::clip_to_triangle(path[i - 1], path[i], tri_of(t), tol)) cover.push_back(*iv);
        std::sort(cover.begin(), cover.end());
        double reach = 0.0;
        bool started = false;
        const double slack = 1e-9;
        for (const auto& [lo, hi] : cover) {
            if (!started) {
                if (lo > slack) return false;
                started = true;
            } else if (lo > reach + slack) {
                return false;
            }
            reach = std::max(reach, hi);
        }
        if (!started || reach < 1.0 - slack) return false;
    }
    return true;
}

}  // namespace renew
