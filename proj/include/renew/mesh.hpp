#pragma once

// Constrained Delaunay triangulation of the world rectangle with every obstacle edge
// (and every bounds edge) kept as a constrained edge, plus the dual adjacency graph of
// its free triangles.
//
// Construction: incremental point insertion with Lawson flips, constraint recovery by
// flipping crossing edges (Sloan), then a global Lawson pass that restores the
// constrained Delaunay property. Only input vertices are used; a constraint is split
// where another input vertex lies exactly on it.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "renew/env.hpp"
#include "renew/geometry.hpp"
#include "renew/predicates.hpp"

namespace renew {

enum class TriangleLabel : std::uint8_t { Free, Hole };

struct NavMesh {
    Rect bounds;
    std::vector<Vec2> vertices;
    /// Counter-clockwise vertex triples.
    std::vector<std::array<int, 3>> triangles;
    /// neighbors[t][i]: triangle across edge i (the edge opposite vertex i), or -1.
    std::vector<std::array<int, 3>> neighbors;
    /// constrained[t][i]: edge i of triangle t is an obstacle or bounds edge.
    std::vector<std::array<bool, 3>> constrained;
    /// Sorted (lo, hi) vertex pairs of every constrained edge.
    std::vector<std::pair<int, int>> constrained_edges;
    std::vector<TriangleLabel> labels;
    /// Obstacle index covering each hole triangle, -1 for free triangles.
    std::vector<int> hole_owner;

    [[nodiscard]] std::size_t triangle_count() const noexcept { return triangles.size(); }
    [[nodiscard]] bool is_free(int t) const noexcept { return labels[static_cast<std::size_t>(t)] == TriangleLabel::Free; }
    [[nodiscard]] Vec2 corner(int t, int i) const noexcept {
        return vertices[static_cast<std::size_t>(triangles[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)])];
    }
    /// Vertex ids of edge i (opposite vertex i), in counter-clockwise order.
    [[nodiscard]] std::pair<int, int> edge_vertices(int t, int i) const noexcept {
        const auto& tri = triangles[static_cast<std::size_t>(t)];
        return {tri[static_cast<std::size_t>((i + 1) % 3)], tri[static_cast<std::size_t>((i + 2) % 3)]};
    }
    [[nodiscard]] Segment edge(int t, int i) const noexcept {
        const auto [a, b] = edge_vertices(t, i);
        return {vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)]};
    }
    [[nodiscard]] Polygon triangle_polygon(int t) const { return {corner(t, 0), corner(t, 1), corner(t, 2)}; }
    [[nodiscard]] Vec2 centroid(int t) const noexcept { return (corner(t, 0) + corner(t, 1) + corner(t, 2)) / 3.0; }
    [[nodiscard]] double area(int t) const noexcept {
        return 0.5 * cross(corner(t, 1) - corner(t, 0), corner(t, 2) - corner(t, 0));
    }
    [[nodiscard]] std::size_t free_count() const noexcept {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), TriangleLabel::Free));
    }
    [[nodiscard]] bool is_constrained(int a, int b) const noexcept { return constrained_edge_id(a, b) >= 0; }
    /// Index into constrained_edges, or -1.
    [[nodiscard]] int constrained_edge_id(int a, int b) const noexcept {
        const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        const auto it = std::lower_bound(constrained_edges.begin(), constrained_edges.end(), key);
        return (it != constrained_edges.end() && *it == key) ? static_cast<int>(it - constrained_edges.begin()) : -1;
    }
    /// True if the edge lies on the world rectangle.
    [[nodiscard]] bool is_bounds_edge(int a, int b) const noexcept {
        const Vec2 p = vertices[static_cast<std::size_t>(a)], q = vertices[static_cast<std::size_t>(b)];
        return (p.x == bounds.xmin && q.x == bounds.xmin) || (p.x == bounds.xmax && q.x == bounds.xmax) ||
               (p.y == bounds.ymin && q.y == bounds.ymin) || (p.y == bounds.ymax && q.y == bounds.ymax);
    }
};

namespace detail {

inline std::uint64_t edge_key(int a, int b) noexcept {
    const auto lo = static_cast<std::uint32_t>(std::min(a, b));
    const auto hi = static_cast<std::uint32_t>(std::max(a, b));
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

class CdtBuilder {
public:
    explicit CdtBuilder(std::vector<Vec2> pts) : pts_(std::move(pts)) {}

    // Corner ids 0..3 in counter-clockwise order must be the bounds rectangle.
    void init_rectangle() {
        add_triangle(0, 1, 2);
        add_triangle(0, 2, 3);
    }

    void insert_point(int p) {
        namespace pr = predicates;
        const Vec2 pp = pts_[static_cast<std::size_t>(p)];
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
            if (!alive_[static_cast<std::size_t>(t)]) continue;
            const auto v = tris_[static_cast<std::size_t>(t)];
            std::array<int, 3> o{};
            for (int i = 0; i < 3; ++i) o[static_cast<std::size_t>(i)] = pr::orient(P(v[(i + 1) % 3]), P(v[(i + 2) % 3]), pp);
            if (o[0] < 0 || o[1] < 0 || o[2] < 0) continue;
            const int zeros = (o[0] == 0) + (o[1] == 0) + (o[2] == 0);
            if (zeros >= 2) return;  // coincides with an existing vertex
            if (zeros == 0) {
                remove_triangle(t);
                add_triangle(v[0], v[1], p);
                add_triangle(v[1], v[2], p);
                add_triangle(v[2], v[0], p);
                legalize(p, {std::pair{v[0], v[1]}, {v[1], v[2]}, {v[2], v[0]}});
                return;
            }
            const int i = o[0] == 0 ? 0 : (o[1] == 0 ? 1 : 2);
            const int a = v[static_cast<std::size_t>(i)];
            const int u = v[static_cast<std::size_t>((i + 1) % 3)];
            const int w = v[static_cast<std::size_t>((i + 2) % 3)];
            const auto [n, b] = opposite(w, u);
            remove_triangle(t);
            add_triangle(a, u, p);
            add_triangle(a, p, w);
            std::vector<std::pair<int, int>> outer{{a, u}, {w, a}};
            if (n >= 0) {
                remove_triangle(n);
                add_triangle(b, w, p);
                add_triangle(b, p, u);
                outer.emplace_back(w, b);
                outer.emplace_back(b, u);
            }
            legalize(p, outer);
            return;
        }
        fail("triangulation: vertex " + std::to_string(p) + " outside bounds");
    }

    void insert_constraint(int a, int b) {
        constrained_.insert(edge_key(a, b));
        if (edges_.contains(edge_key(a, b))) return;
        namespace pr = predicates;
        const Vec2 pa = P(a), pb = P(b);
        std::deque<std::pair<int, int>> crossing;
        std::unordered_set<std::uint64_t> seen;
        for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
            if (!alive_[static_cast<std::size_t>(t)]) continue;
            const auto v = tris_[static_cast<std::size_t>(t)];
            for (int i = 0; i < 3; ++i) {
                const int u = v[static_cast<std::size_t>(i)], w = v[static_cast<std::size_t>((i + 1) % 3)];
                if (!seen.insert(edge_key(u, w)).second) continue;
                if (pr::segments_cross_properly(pa, pb, P(u), P(w))) crossing.emplace_back(u, w);
            }
        }
        std::size_t stalls = 0;
        while (!crossing.empty()) {
            const auto [u, w] = crossing.front();
            crossing.pop_front();
            if (constrained_.contains(edge_key(u, w)))
                fail("triangulation: constraint crosses another constraint");
            const auto [t, p] = opposite(u, w);
            const auto [n, q] = opposite(w, u);
            if (t < 0 || n < 0) fail("triangulation: constraint recovery lost an edge");
            if (pr::orient(P(p), P(u), P(q)) > 0 && pr::orient(P(p), P(q), P(w)) > 0) {
                remove_triangle(t);
                remove_triangle(n);
                add_triangle(p, u, q);
                add_triangle(p, q, w);
                if (pr::segments_cross_properly(pa, pb, P(p), P(q))) crossing.emplace_back(p, q);
                stalls = 0;
            } else {
                crossing.emplace_back(u, w);
                if (++stalls > crossing.size() + 1) fail("triangulation: constraint recovery stalled");
            }
        }
    }

    // Lawson flips on every unconstrained edge until all are locally Delaunay.
    void restore_delaunay() {
        namespace pr = predicates;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
                if (!alive_[static_cast<std::size_t>(t)]) continue;
                const auto v = tris_[static_cast<std::size_t>(t)];
                for (int i = 0; i < 3; ++i) {
                    const int p = v[static_cast<std::size_t>(i)];
                    const int x = v[static_cast<std::size_t>((i + 1) % 3)];
                    const int y = v[static_cast<std::size_t>((i + 2) % 3)];
                    if (constrained_.contains(edge_key(x, y))) continue;
                    const auto [n, q] = opposite(y, x);
                    if (n < 0) continue;
                    if (pr::incircle(P(p), P(x), P(y), P(q)) > 0 && pr::orient(P(p), P(x), P(q)) > 0 &&
                        pr::orient(P(p), P(q), P(y)) > 0) {
                        remove_triangle(t);
                        remove_triangle(n);
                        add_triangle(p, x, q);
                        add_triangle(p, q, y);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    [[nodiscard]] NavMesh finish(const std::vector<Polygon>& obstacles) const {
        NavMesh mesh;
        mesh.bounds = bounding_box(std::span<const Vec2>(pts_.data(), std::min<std::size_t>(4, pts_.size())));
        mesh.vertices = pts_;
        std::vector<int> remap(tris_.size(), -1);
        for (std::size_t t = 0; t < tris_.size(); ++t)
            if (alive_[t]) {
                remap[t] = static_cast<int>(mesh.triangles.size());
                mesh.triangles.push_back(tris_[t]);
            }
        const std::size_t nt = mesh.triangles.size();
        mesh.neighbors.assign(nt, {-1, -1, -1});
        mesh.constrained.assign(nt, {false, false, false});
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!alive_[t]) continue;
            const auto nt_id = static_cast<std::size_t>(remap[t]);
            for (int i = 0; i < 3; ++i) {
                const int x = tris_[t][static_cast<std::size_t>((i + 1) % 3)];
                const int y = tris_[t][static_cast<std::size_t>((i + 2) % 3)];
                const auto [n, q] = opposite(y, x);
                mesh.neighbors[nt_id][static_cast<std::size_t>(i)] = n >= 0 ? remap[static_cast<std::size_t>(n)] : -1;
                mesh.constrained[nt_id][static_cast<std::size_t>(i)] = constrained_.contains(edge_key(x, y));
            }
        }
        for (const auto key : constrained_)
            mesh.constrained_edges.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
        std::sort(mesh.constrained_edges.begin(), mesh.constrained_edges.end());
        mesh.labels.assign(nt, TriangleLabel::Free);
        mesh.hole_owner.assign(nt, -1);
        for (std::size_t t = 0; t < nt; ++t) {
            const Vec2 c = mesh.centroid(static_cast<int>(t));
            for (std::size_t k = 0; k < obstacles.size(); ++k)
                if (point_in_polygon(c, obstacles[k])) {
                    mesh.labels[t] = TriangleLabel::Hole;
                    mesh.hole_owner[t] = static_cast<int>(k);
                    break;
                }
        }
        return mesh;
    }

private:
    [[nodiscard]] Vec2 P(int i) const noexcept { return pts_[static_cast<std::size_t>(i)]; }

    void add_triangle(int a, int b, int c) {
        const int t = static_cast<int>(tris_.size());
        tris_.push_back({a, b, c});
        alive_.push_back(true);
        for (int i = 0; i < 3; ++i) {
            const int x = tris_.back()[static_cast<std::size_t>(i)];
            const int y = tris_.back()[static_cast<std::size_t>((i + 1) % 3)];
            edges_[edge_key(x, y)].push_back(t);
        }
    }

    void remove_triangle(int t) {
        alive_[static_cast<std::size_t>(t)] = false;
        const auto v = tris_[static_cast<std::size_t>(t)];
        for (int i = 0; i < 3; ++i) {
            const auto key = edge_key(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>((i + 1) % 3)]);
            auto it = edges_.find(key);
            auto& list = it->second;
            list.erase(std::remove(list.begin(), list.end(), t), list.end());
            if (list.empty()) edges_.erase(it);
        }
    }

    // Triangle holding the directed edge x -> y, with its apex; {-1, -1} if none.
    [[nodiscard]] std::pair<int, int> opposite(int x, int y) const {
        const auto it = edges_.find(edge_key(x, y));
        if (it == edges_.end()) return {-1, -1};
        for (const int t : it->second) {
            const auto& v = tris_[static_cast<std::size_t>(t)];
            for (int i = 0; i < 3; ++i)
                if (v[static_cast<std::size_t>((i + 1) % 3)] == x && v[static_cast<std::size_t>((i + 2) % 3)] == y)
                    return {t, v[static_cast<std::size_t>(i)]};
        }
        return {-1, -1};
    }

    void legalize(int p, std::vector<std::pair<int, int>> stack) {
        namespace pr = predicates;
        while (!stack.empty()) {
            const auto [x, y] = stack.back();
            stack.pop_back();
            const auto [t, apex] = opposite(x, y);
            if (t < 0 || apex != p) continue;
            const auto [n, q] = opposite(y, x);
            if (n < 0 || constrained_.contains(edge_key(x, y))) continue;
            if (pr::incircle(P(p), P(x), P(y), P(q)) <= 0) continue;
            if (pr::orient(P(p), P(x), P(q)) <= 0 || pr::orient(P(p), P(q), P(y)) <= 0) continue;
            remove_triangle(t);
            remove_triangle(n);
            add_triangle(p, x, q);
            add_triangle(p, q, y);
            stack.emplace_back(x, q);
            stack.emplace_back(q, y);
        }
    }

    std::vector<Vec2> pts_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<bool> alive_;
    std::unordered_map<std::uint64_t, std::vector<int>> edges_;
    std::unordered_set<std::uint64_t> constrained_;
};

}  // namespace detail

/// Vertex deduplication tolerance (metres).
inline constexpr double kVertexMergeTolerance = 1e-9;

/// Triangulates the bounds rectangle with every obstacle and bounds edge constrained.
/// Deterministic: vertices are inserted in input order (bounds corners first).
[[nodiscard]] inline NavMesh build_navmesh(const Rect& bounds, const std::vector<Polygon>& obstacles) {
    for (std::size_t k = 0; k < obstacles.size(); ++k) {
        const auto& poly = obstacles[k];
        if (poly.size() < 3 || std::abs(signed_area(poly)) <= 1e-12)
            fail("obstacle " + std::to_string(k) + ": degenerate polygon (zero area)");
        for (std::size_t i = 0; i < poly.size(); ++i)
            if (distance(poly[i], poly[(i + 1) % poly.size()]) <= kVertexMergeTolerance)
                fail("obstacle " + std::to_string(k) + ": degenerate polygon (duplicate vertex " + std::to_string(i) + ")");
    }

    std::vector<Vec2> pts{{bounds.xmin, bounds.ymin}, {bounds.xmax, bounds.ymin}, {bounds.xmax, bounds.ymax},
                          {bounds.xmin, bounds.ymax}};
    auto intern = [&pts](Vec2 p) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (distance(pts[i], p) <= kVertexMergeTolerance) return static_cast<int>(i);
        pts.push_back(p);
        return static_cast<int>(pts.size() - 1);
    };
    std::vector<std::pair<int, int>> segments{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (const auto& poly : obstacles) {
        std::vector<int> ids;
        for (const auto& v : poly) ids.push_back(intern(v));
        for (std::size_t i = 0; i < ids.size(); ++i) segments.emplace_back(ids[i], ids[(i + 1) % ids.size()]);
    }

    // Split constraints at input vertices lying exactly on them.
    std::vector<std::pair<int, int>> pieces;
    std::unordered_set<std::uint64_t> piece_keys;
    for (const auto& [a, b] : segments) {
        const Vec2 pa = pts[static_cast<std::size_t>(a)], pb = pts[static_cast<std::size_t>(b)];
        std::vector<std::pair<double, int>> on;
        for (std::size_t v = 0; v < pts.size(); ++v) {
            const int vi = static_cast<int>(v);
            if (vi == a || vi == b) continue;
            if (predicates::on_segment(pa, pb, pts[v])) on.emplace_back(distance(pa, pts[v]), vi);
        }
        std::sort(on.begin(), on.end());
        int prev = a;
        on.emplace_back(distance(pa, pb), b);
        for (const auto& [d, v] : on) {
            if (prev != v && piece_keys.insert(detail::edge_key(prev, v)).second) pieces.emplace_back(prev, v);
            prev = v;
        }
    }

    detail::CdtBuilder builder(pts);
    builder.init_rectangle();
    for (int i = 4; i < static_cast<int>(pts.size()); ++i) builder.insert_point(i);
    for (const auto& [a, b] : pieces) builder.insert_constraint(a, b);
    builder.restore_delaunay();
    return builder.finish(obstacles);
}

[[nodiscard]] inline NavMesh build_navmesh(const Environment& env) { return build_navmesh(env.bounds, env.obstacles); }

/// Free triangle containing `x`, boundary inclusive, lowest id on ties; nullopt inside a
/// hole or outside the mesh.
[[nodiscard]] inline std::optional<int> locate_triangle(const NavMesh& mesh, Vec2 x) {
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
        if (!mesh.is_free(t)) continue;
        if (predicates::orient(mesh.corner(t, 0), mesh.corner(t, 1), x) >= 0 &&
            predicates::orient(mesh.corner(t, 1), mesh.corner(t, 2), x) >= 0 &&
            predicates::orient(mesh.corner(t, 2), mesh.corner(t, 0), x) >= 0)
            return t;
    }
    return std::nullopt;
}

struct DualEdge {
    int tri_a{-1};
    int tri_b{-1};
    int vertex_a{-1};
    int vertex_b{-1};
    Segment passing;
};

/// Free triangles joined across unconstrained shared edges.
struct DualGraph {
    std::vector<int> nodes;  ///< free triangle ids, ascending
    std::vector<DualEdge> edges;
    /// adjacency[t]: (neighbor triangle, dual edge id), ascending by neighbor; empty for holes.
    std::vector<std::vector<std::pair<int, int>>> adjacency;

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes.size(); }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edges.size(); }
    /// Dual edge between two triangles, or -1.
    [[nodiscard]] int edge_between(int a, int b) const {
        for (const auto& [n, e] : adjacency[static_cast<std::size_t>(a)])
            if (n == b) return e;
        return -1;
    }
};

[[nodiscard]] inline DualGraph build_dual(const NavMesh& mesh) {
    DualGraph g;
    g.adjacency.resize(mesh.triangle_count());
    for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
        if (!mesh.is_free(t)) continue;
        g.nodes.push_back(t);
        for (int i = 0; i < 3; ++i) {
            const int n = mesh.neighbors[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
            if (n < 0 || n < t || !mesh.is_free(n) || mesh.constrained[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)])
                continue;
            const auto [va, vb] = mesh.edge_vertices(t, i);
            const int id = static_cast<int>(g.edges.size());
            g.edges.push_back({t, n, va, vb, mesh.edge(t, i)});
            g.adjacency[static_cast<std::size_t>(t)].emplace_back(n, id);
            g.adjacency[static_cast<std::size_t>(n)].emplace_back(t, id);
        }
    }
    for (auto& adj : g.adjacency) std::sort(adj.begin(), adj.end());
    return g;
}

}  // namespace renew
