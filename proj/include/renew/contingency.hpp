#pragma once

// Abort drills along a planned path: at every station the vehicle attempts both hard-over
// turns under one realization of the current; a station counts as a collision when both
// turns enter an obstacle.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "renew/dynamics.hpp"
#include "renew/env.hpp"
#include "renew/geometry.hpp"

namespace renew {

struct ContingencyConfig {
    double spacing{1.0};
    double dt{kContingencyDt};
    bool noise{true};  ///< perturb the field per trial with its configured sigmas
    std::uint64_t seed{0xC0FFEEu};
};

struct StationResult {
    double s{0.0};
    Vec2 position;
    double heading{0.0};
    double rotation{0.0};         ///< current realization
    double magnitude_delta{0.0};  ///< current realization
    double left_clearance{0.0};
    double right_clearance{0.0};
    bool collided{false};

    [[nodiscard]] Turn better_turn() const noexcept { return left_clearance >= right_clearance ? Turn::Left : Turn::Right; }
    [[nodiscard]] double better_clearance() const noexcept { return std::max(left_clearance, right_clearance); }
};

struct ContingencyReport {
    int trials{0};
    int collisions{0};
    double path_length{0.0};
    std::vector<StationResult> stations;

    [[nodiscard]] std::vector<const StationResult*> collision_sites() const {
        std::vector<const StationResult*> out;
        for (const auto& s : stations)
            if (s.collided) out.push_back(&s);
        return out;
    }
};

/// Signed distance to the obstacle set: positive outside, minus the depth inside.
class ObstacleClearance {
public:
    ObstacleClearance(const std::vector<Polygon>& obstacles, Vec2 center, double reach) {
        for (const auto& poly : obstacles) {
            const Rect b = bounding_box(poly);
            const double dx = std::max({b.xmin - center.x, 0.0, center.x - b.xmax});
            const double dy = std::max({b.ymin - center.y, 0.0, center.y - b.ymax});
            if (std::hypot(dx, dy) <= reach) {
                polys_.push_back(&poly);
                boxes_.push_back(b);
            }
        }
    }

    [[nodiscard]] double operator()(Vec2 p) const noexcept {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < polys_.size(); ++k) {
            const Rect& b = boxes_[k];
            const double dx = std::max({b.xmin - p.x, 0.0, p.x - b.xmax});
            const double dy = std::max({b.ymin - p.y, 0.0, p.y - b.ymax});
            if (std::hypot(dx, dy) >= best) continue;
            const double d = point_polygon_boundary_distance(p, *polys_[k]);
            best = std::min(best, point_in_polygon(p, *polys_[k]) ? -d : d);
        }
        return best;
    }

    [[nodiscard]] bool empty() const noexcept { return polys_.empty(); }

private:
    std::vector<const Polygon*> polys_;
    std::vector<Rect> boxes_;
};

/// Minimum signed obstacle clearance over one hard-over revolution.
[[nodiscard]] inline double contingency_turn(const VehicleState& entry, Turn turn, const Environment& env,
                                             const VehicleModel& vehicle, double rotation, double magnitude_delta,
                                             double dt = kContingencyDt) {
    const double horizon = hard_over_horizon(vehicle);
    const double reach = (vehicle.v_thrust + env.field.max_magnitude() + std::abs(magnitude_delta)) * horizon + 1.0;
    const ObstacleClearance clearance(env.obstacles, entry.position, reach);
    if (clearance.empty()) return std::numeric_limits<double>::infinity();
    const PerturbedCurrent<CurrentField> current{&env.field, rotation, magnitude_delta};
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt));
    double best = std::numeric_limits<double>::infinity();
    simulate(entry, turn_sign(turn) * vehicle.omega_max, current, vehicle, dt, steps, [&](const VehicleState& s) {
        best = std::min(best, clearance(s.position));
        return true;
    });
    return best;
}

/// Runs a drill every `spacing` metres of arc length (floor(L / spacing) + 1 stations),
/// heading along the outgoing path tangent.
[[nodiscard]] inline ContingencyReport simulate_contingency(std::span<const Vec2> path, const Environment& env,
                                                            const VehicleModel& vehicle,
                                                            const ContingencyConfig& cfg = {}) {
    if (!(cfg.spacing > 0.0)) fail("contingency: spacing must be > 0");
    ContingencyReport rep;
    rep.path_length = polyline_length(path);
    const auto n = static_cast<int>(std::floor(rep.path_length / cfg.spacing + 1e-9)) + 1;
    for (int k = 0; k < n; ++k) {
        StationResult st;
        st.s = k * cfg.spacing;
        const auto pt = point_at_arclength(path, st.s);
        st.position = pt.position;
        st.heading = std::atan2(pt.tangent.y, pt.tangent.x);
        if (cfg.noise) {
            std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
            std::normal_distribution<double> n01(0.0, 1.0);
            st.rotation = env.field.noise_sigma_dir() * n01(rng);
            st.magnitude_delta = env.field.noise_sigma_mag() * n01(rng);
        }
        const VehicleState entry{st.position, st.heading};
        st.left_clearance = contingency_turn(entry, Turn::Left, env, vehicle, st.rotation, st.magnitude_delta, cfg.dt);
        st.right_clearance = contingency_turn(entry, Turn::Right, env, vehicle, st.rotation, st.magnitude_delta, cfg.dt);
        st.collided = st.left_clearance < 0.0 && st.right_clearance < 0.0;
        rep.collisions += st.collided;
        rep.stations.push_back(st);
    }
    rep.trials = static_cast<int>(rep.stations.size());
    return rep;
}

}  // namespace renew
