#pragma once

// Grid A* comparison planner: occupancy raster with an optional padding band, 8-connected
// or heading-lattice (Dubins-style) search, and a randomized shortcut smoother.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <vector>

#include "renew/env.hpp"
#include "renew/geometry.hpp"
#include "renew/padding.hpp"
#include "renew/planner.hpp"

namespace renew {

enum class Cell : std::uint8_t { Free, Obstacle, Padded };

struct Grid {
    Rect bounds;
    double resolution{1.0};
    int nx{0};
    int ny{0};
    std::vector<Cell> cells;

    [[nodiscard]] Cell at(int i, int j) const noexcept { return cells[static_cast<std::size_t>(j) * nx + i]; }
    [[nodiscard]] bool inside(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < nx && j < ny; }
    [[nodiscard]] bool passable(int i, int j) const noexcept { return inside(i, j) && at(i, j) == Cell::Free; }
    [[nodiscard]] Vec2 center(int i, int j) const noexcept {
        return {bounds.xmin + (i + 0.5) * resolution, bounds.ymin + (j + 0.5) * resolution};
    }
    [[nodiscard]] std::pair<int, int> cell_of(Vec2 p) const noexcept {
        return {static_cast<int>(std::floor((p.x - bounds.xmin) / resolution)),
                static_cast<int>(std::floor((p.y - bounds.ymin) / resolution))};
    }
    [[nodiscard]] std::size_t count(Cell c) const noexcept {
        return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), c));
    }

    /// Every sample along the segment (spacing resolution / 4) lies in a passable cell.
    [[nodiscard]] bool segment_free(Vec2 a, Vec2 b) const noexcept {
        const double len = distance(a, b);
        const auto n = static_cast<int>(std::ceil(len / (0.25 * resolution)));
        for (int s = 0; s <= n; ++s) {
            const auto [i, j] = cell_of(n == 0 ? a : lerp(a, b, static_cast<double>(s) / n));
            if (!passable(i, j)) return false;
        }
        return true;
    }
};

/// Cells whose centre lies in an obstacle are Obstacle; remaining cells whose centre lies
/// closer than a band constraint's offset to its segment are Padded.
[[nodiscard]] inline Grid rasterize(const Environment& env, double resolution, std::span<const BandConstraint> band = {}) {
    if (!(resolution > 0.0)) fail("rasterize: resolution must be > 0");
    Grid g;
    g.bounds = env.bounds;
    g.resolution = resolution;
    g.nx = static_cast<int>(std::ceil(env.bounds.width() / resolution - 1e-9));
    g.ny = static_cast<int>(std::ceil(env.bounds.height() / resolution - 1e-9));
    g.cells.assign(static_cast<std::size_t>(g.nx) * g.ny, Cell::Free);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const Vec2 c = g.center(i, j);
            Cell& cell = g.cells[static_cast<std::size_t>(j) * g.nx + i];
            for (const auto& poly : env.obstacles)
                if (point_in_polygon(c, poly)) {
                    cell = Cell::Obstacle;
                    break;
                }
            if (cell != Cell::Free) continue;
            for (const auto& b : band)
                if (point_segment_distance(c, b.edge) < b.offset) {
                    cell = Cell::Padded;
                    break;
                }
        }
    return g;
}

/// Every obstacle edge (and, when asked, every bounds edge) padded by `d`.
[[nodiscard]] inline std::vector<BandConstraint> fixed_band(const Environment& env, double d, bool pad_bounds = true) {
    std::vector<BandConstraint> band;
    if (!(d > 0.0)) return band;
    for (const auto& poly : env.obstacles)
        for (std::size_t i = 0; i < poly.size(); ++i) band.push_back({{poly[i], poly[(i + 1) % poly.size()]}, d});
    if (pad_bounds) {
        const Rect& r = env.bounds;
        const Vec2 c[4] = {{r.xmin, r.ymin}, {r.xmax, r.ymin}, {r.xmax, r.ymax}, {r.xmin, r.ymax}};
        for (int i = 0; i < 4; ++i) band.push_back({{c[i], c[(i + 1) % 4]}, d});
    }
    return band;
}

/// Per constrained edge, the largest adaptive offset any channel of a plan assigned.
[[nodiscard]] inline std::vector<BandConstraint> adaptive_band(const PlanResult& result) {
    std::vector<double> best(result.mesh.constrained_edges.size(), 0.0);
    for (const auto& ch : result.channels)
        for (const auto& e : ch.padding.edges)
            best[static_cast<std::size_t>(e.edge_id)] = std::max(best[static_cast<std::size_t>(e.edge_id)], e.offset);
    std::vector<BandConstraint> band;
    for (std::size_t id = 0; id < best.size(); ++id) {
        if (best[id] <= 0.0) continue;
        const auto [a, b] = result.mesh.constrained_edges[id];
        band.push_back({{result.mesh.vertices[static_cast<std::size_t>(a)], result.mesh.vertices[static_cast<std::size_t>(b)]},
                        best[id]});
    }
    return band;
}

enum class Motion { EightConnected, Dubins };

/// Heading lattice size of the Dubins-style search.
inline constexpr int kDubinsHeadings = 16;

struct GridPath {
    bool found{false};
    Polyline path;  ///< start, cell centres, goal
    double cost{0.0};
    std::size_t expanded{0};  ///< states popped and closed
    std::size_t reached{0};   ///< distinct states given a finite cost (open or closed)
};

namespace detail {

// Cell displacement for lattice heading h (multiples of 22.5 degrees), on the 16-neighbourhood.
inline std::array<int, 2> heading_step(int h) {
    static constexpr std::array<std::array<int, 2>, 16> steps{{{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}, {-1, 2},
                                                               {-1, 1}, {-2, 1}, {-1, 0}, {-2, -1}, {-1, -1}, {-1, -2},
                                                               {0, -1}, {1, -2}, {1, -1}, {2, -1}}};
    return steps[static_cast<std::size_t>(((h % 16) + 16) % 16)];
}

inline double octile(int di, int dj) {
    const double a = std::abs(di), b = std::abs(dj);
    return std::max(a, b) + (std::sqrt(2.0) - 1.0) * std::min(a, b);
}

struct QueueEntry {
    double f;
    double g;
    int state;
    bool operator>(const QueueEntry& o) const noexcept { return f > o.f || (f == o.f && state > o.state); }
};

}  // namespace detail

/// A* on the grid. 8-connected moves may not cut blocked corners. Dubins mode searches
/// (cell, heading) states; each move changes heading by at most one lattice step and its
/// straight displacement must stay in passable cells. Cost is path length in metres.
[[nodiscard]] inline GridPath astar(const Grid& grid, Vec2 start, Vec2 goal, Motion motion = Motion::EightConnected) {
    const auto [si, sj] = grid.cell_of(start);
    const auto [gi, gj] = grid.cell_of(goal);
    if (!grid.passable(si, sj)) fail("astar: start cell is blocked");
    if (!grid.passable(gi, gj)) fail("astar: goal cell is blocked");
    const int layers = motion == Motion::Dubins ? kDubinsHeadings : 1;
    const std::size_t n_states = static_cast<std::size_t>(grid.nx) * grid.ny * layers;
    std::vector<double> g_cost(n_states, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n_states, -1);
    std::vector<char> closed(n_states, 0);
    auto id = [&](int i, int j, int h) { return (h * grid.ny + j) * grid.nx + i; };
    auto h_cost = [&](int i, int j) {
        return motion == Motion::Dubins ? grid.resolution * std::hypot(gi - i, gj - j)
                                        : grid.resolution * detail::octile(gi - i, gj - j);
    };
    std::priority_queue<detail::QueueEntry, std::vector<detail::QueueEntry>, std::greater<>> open;
    GridPath out;
    for (int h = 0; h < layers; ++h) {
        const int s = id(si, sj, h);
        g_cost[static_cast<std::size_t>(s)] = 0.0;
        ++out.reached;
        open.push({h_cost(si, sj), 0.0, s});
    }
    int goal_state = -1;
    while (!open.empty()) {
        const auto top = open.top();
        open.pop();
        if (closed[static_cast<std::size_t>(top.state)]) continue;
        closed[static_cast<std::size_t>(top.state)] = 1;
        ++out.expanded;
        const int i = top.state % grid.nx;
        const int j = (top.state / grid.nx) % grid.ny;
        const int h = top.state / (grid.nx * grid.ny);
        if (i == gi && j == gj) {
            goal_state = top.state;
            break;
        }
        auto relax = [&](int ni, int nj, int nh, double step) {
            const int ns = id(ni, nj, nh);
            const double ng = top.g + step;
            if (ng < g_cost[static_cast<std::size_t>(ns)]) {
                if (std::isinf(g_cost[static_cast<std::size_t>(ns)])) ++out.reached;
                g_cost[static_cast<std::size_t>(ns)] = ng;
                parent[static_cast<std::size_t>(ns)] = top.state;
                open.push({ng + h_cost(ni, nj), ng, ns});
            }
        };
        if (motion == Motion::EightConnected) {
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const int ni = i + di, nj = j + dj;
                    if (!grid.passable(ni, nj)) continue;
                    if (di != 0 && dj != 0 && (!grid.passable(i + di, j) || !grid.passable(i, j + dj))) continue;
                    relax(ni, nj, 0, grid.resolution * ((di != 0 && dj != 0) ? std::sqrt(2.0) : 1.0));
                }
        } else {
            for (int dh = -1; dh <= 1; ++dh) {
                const int nh = ((h + dh) % kDubinsHeadings + kDubinsHeadings) % kDubinsHeadings;
                const auto [di, dj] = detail::heading_step(nh);
                const int ni = i + di, nj = j + dj;
                if (!grid.passable(ni, nj) || !grid.segment_free(grid.center(i, j), grid.center(ni, nj))) continue;
                relax(ni, nj, nh, grid.resolution * std::hypot(di, dj));
            }
        }
    }
    if (goal_state < 0) return out;
    out.found = true;
    out.cost = g_cost[static_cast<std::size_t>(goal_state)];
    std::vector<Vec2> rev;
    for (int s = goal_state; s >= 0; s = parent[static_cast<std::size_t>(s)])
        rev.push_back(grid.center(s % grid.nx, (s / grid.nx) % grid.ny));
    std::reverse(rev.begin(), rev.end());
    out.path.push_back(start);
    for (std::size_t k = 1; k + 1 < rev.size(); ++k) out.path.push_back(rev[k]);
    out.path.push_back(goal);
    return out;
}

/// Randomized shortcutting followed by a greedy farthest-visible pass. The output is
/// never longer than the input and stays in passable cells.
[[nodiscard]] inline Polyline shortcut_smooth(std::span<const Vec2> path, const Grid& grid, std::uint64_t seed,
                                              int iterations = 200) {
    Polyline p(path.begin(), path.end());
    if (p.size() < 3) return p;
    std::mt19937_64 rng(mix_seed(seed));
    for (int it = 0; it < iterations && p.size() > 2; ++it) {
        std::uniform_int_distribution<std::size_t> pick(0, p.size() - 1);
        std::size_t a = pick(rng), b = pick(rng);
        if (a > b) std::swap(a, b);
        if (b < a + 2) continue;
        if (!grid.segment_free(p[a], p[b])) continue;
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(a + 1), p.begin() + static_cast<std::ptrdiff_t>(b));
    }
    Polyline out{p.front()};
    std::size_t i = 0;
    while (i + 1 < p.size()) {
        std::size_t j = p.size() - 1;
        while (j > i + 1 && !grid.segment_free(p[i], p[j])) --j;
        out.push_back(p[j]);
        i = j;
    }
    return out;
}

struct BaselineResult {
    GridPath raw;
    Polyline smoothed;
    PlanMetrics raw_metrics;
    PlanMetrics smoothed_metrics;
};

/// Grid A* plus smoothing, both scored with the planner's fuel integral.
[[nodiscard]] inline BaselineResult run_baseline(const Environment& env, const Grid& grid, Vec2 start, Vec2 goal,
                                                 Motion motion, const FuelModel& fuel, std::uint64_t seed) {
    BaselineResult r;
    r.raw = astar(grid, start, goal, motion);
    if (!r.raw.found) throw Error(ErrorKind::NoFeasiblePlan, "grid A*: goal unreachable");
    r.smoothed = shortcut_smooth(r.raw.path, grid, seed);
    r.raw_metrics = path_metrics(r.raw.path, fuel_cost(r.raw.path, env.field, env.vehicle, fuel), env);
    r.smoothed_metrics = path_metrics(r.smoothed, fuel_cost(r.smoothed, env.field, env.vehicle, fuel), env);
    r.raw_metrics.states = r.smoothed_metrics.states = static_cast<int>(r.raw.reached);
    return r;
}

}  // namespace renew
