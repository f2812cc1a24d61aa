#pragma once

// Constant-thrust unicycle drifting in a current:
//   px' = v cos(theta) + cx(p),  py' = v sin(theta) + cy(p),  theta' = omega
// integrated with fixed-step classical Runge-Kutta.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "renew/env.hpp"
#include "renew/geometry.hpp"

namespace renew {

struct VehicleState {
    Vec2 position;
    double heading{0.0};  ///< radians, (-pi, pi]
};

struct Trajectory {
    std::vector<VehicleState> states;
    double dt{0.0};

    [[nodiscard]] double duration() const noexcept {
        return states.empty() ? 0.0 : dt * static_cast<double>(states.size() - 1);
    }
};

enum class Turn { Left, Right };

[[nodiscard]] constexpr double turn_sign(Turn t) noexcept { return t == Turn::Left ? 1.0 : -1.0; }
[[nodiscard]] constexpr const char* to_string(Turn t) noexcept { return t == Turn::Left ? "left" : "right"; }

/// Integration step defaults: coarse for padding sampling, fine for contingency checks.
inline constexpr double kPaddingDt = 0.05;
inline constexpr double kContingencyDt = 0.01;

namespace detail {

struct RawState {
    double x, y, th;
};

template <CurrentSource F>
inline RawState rk4_step(const RawState& s, double omega, double v, const F& field, double dt) {
    auto deriv = [&](const RawState& q) {
        const Vec2 c = field.sample({q.x, q.y});
        return RawState{v * std::cos(q.th) + c.x, v * std::sin(q.th) + c.y, omega};
    };
    const RawState k1 = deriv(s);
    const RawState k2 = deriv({s.x + 0.5 * dt * k1.x, s.y + 0.5 * dt * k1.y, s.th + 0.5 * dt * k1.th});
    const RawState k3 = deriv({s.x + 0.5 * dt * k2.x, s.y + 0.5 * dt * k2.y, s.th + 0.5 * dt * k2.th});
    const RawState k4 = deriv({s.x + dt * k3.x, s.y + dt * k3.y, s.th + dt * k3.th});
    return {s.x + dt / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
            s.y + dt / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
            s.th + dt / 6.0 * (k1.th + 2 * k2.th + 2 * k3.th + k4.th)};
}

}  // namespace detail

/// Streams `steps + 1` states (including the start) to `visit`; stops early when the
/// visitor returns false.
template <CurrentSource F, typename Visitor>
void simulate(const VehicleState& start, double omega, const F& field, const VehicleModel& vehicle, double dt,
              std::size_t steps, Visitor&& visit) {
    detail::RawState s{start.position.x, start.position.y, start.heading};
    if (!visit(VehicleState{start.position, wrap_angle(start.heading)})) return;
    for (std::size_t i = 0; i < steps; ++i) {
        s = detail::rk4_step(s, omega, vehicle.v_thrust, field, dt);
        if (!visit(VehicleState{{s.x, s.y}, wrap_angle(s.th)})) return;
    }
}

/// Uniform-current specialization. The derivative does not depend on position, so RK4
/// reduces to Simpson's rule on the heading terms; headings advance by exact rotation.
template <typename Visitor>
void simulate(const VehicleState& start, double omega, const UniformCurrent& field, const VehicleModel& vehicle,
              double dt, std::size_t steps, Visitor&& visit) {
    double x = start.position.x, y = start.position.y;
    if (!visit(VehicleState{start.position, wrap_angle(start.heading)})) return;
    const double v = vehicle.v_thrust;
    const Vec2 c = field.velocity;
    const double hc = std::cos(0.5 * omega * dt), hs = std::sin(0.5 * omega * dt);
    double ca = std::cos(start.heading), sa = std::sin(start.heading);
    for (std::size_t i = 0; i < steps; ++i) {
        const double cm = ca * hc - sa * hs, sm = sa * hc + ca * hs;
        const double cb = cm * hc - sm * hs, sb = sm * hc + cm * hs;
        x += dt / 6.0 * (v * (ca + 4.0 * cm + cb) + 6.0 * c.x);
        y += dt / 6.0 * (v * (sa + 4.0 * sm + sb) + 6.0 * c.y);
        ca = cb;
        sa = sb;
        if (!visit(VehicleState{{x, y}, wrap_angle(start.heading + omega * dt * static_cast<double>(i + 1))})) return;
    }
}

template <CurrentSource F>
[[nodiscard]] Trajectory integrate(const VehicleState& start, double omega, const F& field, const VehicleModel& vehicle,
                                   double dt, double duration) {
    if (!(dt > 0.0)) fail("integrate: dt must be > 0");
    if (std::abs(omega) > vehicle.omega_max * (1.0 + 1e-12)) fail("integrate: |omega| exceeds omega_max");
    const auto steps = static_cast<std::size_t>(std::max(0.0, std::round(duration / dt)));
    Trajectory traj;
    traj.dt = dt;
    traj.states.reserve(steps + 1);
    simulate(start, omega, field, vehicle, dt, steps, [&traj](const VehicleState& s) {
        traj.states.push_back(s);
        return true;
    });
    return traj;
}

/// Duration of one full heading revolution at omega_max.
[[nodiscard]] inline double hard_over_horizon(const VehicleModel& vehicle) noexcept { return kTwoPi / vehicle.omega_max; }

/// Signed distance from `p` to `edge`, positive on the free side. The free side is the
/// side holding `entry`, or the left of a->b when the entry lies on the edge's line.
/// Points past the line within the edge's span report minus their depth.
struct EdgeClearance {
    Segment edge;
    Vec2 normal;  ///< unit, pointing to the free side
    double length;

    EdgeClearance(const Segment& e, Vec2 entry) : edge(e), length(e.length()) {
        const Vec2 d = (e.b - e.a) / length;
        normal = {-d.y, d.x};
        if (dot(entry - e.a, normal) < -1e-9 * std::max(1.0, length)) normal = -normal;
    }

    [[nodiscard]] double operator()(Vec2 p) const noexcept {
        const double side = dot(p - edge.a, normal);
        const double along = dot(p - edge.a, edge.b - edge.a) / (length * length);
        if (side < 0.0 && along >= 0.0 && along <= 1.0) return side;
        return point_segment_distance(p, edge);
    }
};

/// Minimum signed distance to `edge` over one full hard-over revolution (negative when
/// the turn crosses the edge).
template <CurrentSource F>
[[nodiscard]] double hard_over_clearance(const VehicleState& entry, Turn turn, const Segment& edge, const F& field,
                                         const VehicleModel& vehicle, double dt = kPaddingDt) {
    const EdgeClearance clearance(edge, entry.position);
    const auto steps = static_cast<std::size_t>(std::ceil(hard_over_horizon(vehicle) / dt));
    double best = std::numeric_limits<double>::infinity();
    simulate(entry, turn_sign(turn) * vehicle.omega_max, field, vehicle, dt, steps, [&](const VehicleState& s) {
        best = std::min(best, clearance(s.position));
        return true;
    });
    return best;
}

/// Extreme excursions of a hard-over turn relative to the entry pose: forward travel
/// (advance) and lateral travel toward the turn side (tactical diameter).
struct TurnExtremes {
    double advance{0.0};
    double tactical_diameter{0.0};
};

template <CurrentSource F>
[[nodiscard]] TurnExtremes turn_extremes(const VehicleState& entry, Turn turn, const F& field, const VehicleModel& vehicle,
                                         double dt = kPaddingDt) {
    const Vec2 fwd = unit(entry.heading);
    const Vec2 side = Vec2{-fwd.y, fwd.x} * turn_sign(turn);
    TurnExtremes ex;
    const auto steps = static_cast<std::size_t>(std::ceil(hard_over_horizon(vehicle) / dt));
    simulate(entry, turn_sign(turn) * vehicle.omega_max, field, vehicle, dt, steps, [&](const VehicleState& s) {
        ex.advance = std::max(ex.advance, dot(s.position - entry.position, fwd));
        ex.tactical_diameter = std::max(ex.tactical_diameter, dot(s.position - entry.position, side));
        return true;
    });
    return ex;
}

/// Sampling setup for best-effort manoeuvres.
struct BestEffortConfig {
    double heading_spread{30.0 * kPi / 180.0};  ///< half-width of the heading window
    double dt{kPaddingDt};
    std::uint64_t seed{0x5EEDu};
};

/// splitmix64 finalizer; derives independent substream seeds.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    return mix_seed(a ^ mix_seed(b + 0x632BE59BD9B4E019ull));
}

/// Draws one uniform current from local statistics: mean direction and magnitude with
/// Gaussian perturbations.
template <typename Rng>
[[nodiscard]] Vec2 draw_current(const CurrentStats& stats, Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double dir = std::atan2(stats.mean.y, stats.mean.x) + stats.std_dir * n01(rng);
    const double mag = std::max(0.0, norm(stats.mean) + stats.std_mag * n01(rng));
    return unit(dir) * mag;
}

/// Per-sample best-turn clearance to `edge` for a vehicle entering at `entry` with
/// heading drawn uniformly in [phi - spread, phi + spread] and a uniform current drawn
/// from the current statistics of `entry_region`. The vehicle picks its better turn;
/// the spread of the returned values is the disturbance distribution.
[[nodiscard]] inline std::vector<double> best_effort_distance_samples(std::span<const Vec2> entry_region, Vec2 entry,
                                                                      double phi, const CurrentField& field,
                                                                      const VehicleModel& vehicle, const Segment& edge,
                                                                      int n_samples, const BestEffortConfig& cfg = {}) {
    if (n_samples < 1) fail("best_effort_distance_samples: n_samples must be >= 1");
    const CurrentStats stats = local_current_stats(field, entry_region);
    std::mt19937_64 rng(mix_seed(cfg.seed));
    std::uniform_real_distribution<double> heading_dist(-1.0, 1.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double heading = phi + cfg.heading_spread * heading_dist(rng);
        const UniformCurrent current{draw_current(stats, rng)};
        const VehicleState s{entry, heading};
        const double left = hard_over_clearance(s, Turn::Left, edge, current, vehicle, cfg.dt);
        const double right = hard_over_clearance(s, Turn::Right, edge, current, vehicle, cfg.dt);
        out.push_back(std::max(left, right));
    }
    return out;
}

/// Convenience overload entering at the midpoint of `edge` (clearances are then minus
/// the encroachment depth).
[[nodiscard]] inline std::vector<double> best_effort_distance_samples(std::span<const Vec2> entry_region, double phi,
                                                                      const CurrentField& field,
                                                                      const VehicleModel& vehicle, const Segment& edge,
                                                                      int n_samples, const BestEffortConfig& cfg = {}) {
    return best_effort_distance_samples(entry_region, edge.midpoint(), phi, field, vehicle, edge, n_samples, cfg);
}

}  // namespace renew
