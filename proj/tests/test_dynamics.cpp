#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace renew;
using renew::testing::ConstantSource;
using renew::testing::SmoothGyre;

namespace {

const VehicleModel kBoat{};

// Closed form for a constant turn in a uniform current.
Vec2 trochoid(double t, double omega, double v, Vec2 c) {
    return {v / omega * std::sin(omega * t) + c.x * t, v / omega * (1.0 - std::cos(omega * t)) + c.y * t};
}

double spread(const std::vector<double>& s) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return *hi - *lo;
}

}  // namespace

TEST(Dynamics, StillWaterTurnIsCircle) {
    const double r = kBoat.turn_radius();
    EXPECT_NEAR(r, 1.0 / (35.0 * kPi / 180.0), 1e-12);
    const auto traj = integrate(VehicleState{{0, 0}, 0.0}, kBoat.omega_max, UniformCurrent{}, kBoat, 1e-3,
                                hard_over_horizon(kBoat));
    for (const auto& s : traj.states) EXPECT_NEAR(distance(s.position, {0, r}), r, 1e-4);
}

TEST(Dynamics, UniformCurrentTurnIsTrochoid) {
    const Vec2 c{0.3, -0.2};
    const auto a = integrate(VehicleState{{0, 0}, 0.0}, kBoat.omega_max, UniformCurrent{c}, kBoat, 1e-3, 8.0);
    const auto b = integrate(VehicleState{{0, 0}, 0.0}, kBoat.omega_max, CurrentField::uniform(c), kBoat, 1e-3, 8.0);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); i += 100) {
        const Vec2 want = trochoid(a.dt * static_cast<double>(i), kBoat.omega_max, kBoat.v_thrust, c);
        EXPECT_NEAR(a.states[i].position.x, want.x, 1e-6);
        EXPECT_NEAR(a.states[i].position.y, want.y, 1e-6);
        EXPECT_NEAR(b.states[i].position.x, want.x, 1e-6);
        EXPECT_NEAR(b.states[i].position.y, want.y, 1e-6);
    }
}

TEST(Dynamics, ZeroRateIsStraightLine) {
    const auto traj = integrate(VehicleState{{1, 2}, 0.0}, 0.0, ConstantSource{{0.25, 0.0}}, kBoat, 0.1, 10.0);
    EXPECT_NEAR(traj.states.back().position.x, 1.0 + 1.25 * 10.0, 1e-9);
    EXPECT_NEAR(traj.states.back().position.y, 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(traj.duration(), 10.0);
}

TEST(Dynamics, RateAboveLimitRejected) {
    EXPECT_THROW((void)integrate(VehicleState{}, 2.0 * kBoat.omega_max, UniformCurrent{}, kBoat, 0.1, 1.0), Error);
    EXPECT_THROW((void)integrate(VehicleState{}, 0.0, UniformCurrent{}, kBoat, 0.0, 1.0), Error);
}

TEST(Dynamics, FourthOrderConvergence) {
    const SmoothGyre field;
    const VehicleState s0{{13, 7}, 0.4};
    auto end = [&](double dt) { return integrate(s0, 0.5 * kBoat.omega_max, field, kBoat, dt, 10.0).states.back().position; };
    const Vec2 ref = end(1e-3);
    const double e1 = distance(end(0.2), ref), e2 = distance(end(0.1), ref);
    const double ratio = e1 / e2;
    EXPECT_GT(ratio, 12.0);
    EXPECT_LT(ratio, 20.0);
}

TEST(Dynamics, AdvanceAndTacticalDiameter) {
    const double r = kBoat.turn_radius();
    for (const Turn t : {Turn::Left, Turn::Right}) {
        const auto ex = turn_extremes(VehicleState{{5, 5}, 1.0}, t, UniformCurrent{}, kBoat, 1e-3);
        EXPECT_NEAR(ex.advance, r, 1e-4);
        EXPECT_NEAR(ex.tactical_diameter, 2.0 * r, 1e-4);
    }
}

TEST(Dynamics, HardOverClearanceToParallelEdge) {
    const double r = kBoat.turn_radius();
    const Segment edge{{-50, 0}, {50, 0}};
    const VehicleState entry{{0, 2 * r + 1}, 0.0};
    EXPECT_NEAR(hard_over_clearance(entry, Turn::Right, edge, UniformCurrent{}, kBoat, 1e-3), 1.0, 1e-4);
    EXPECT_NEAR(hard_over_clearance(entry, Turn::Left, edge, UniformCurrent{}, kBoat, 1e-3), 2 * r + 1, 1e-9);
    const double pushed = hard_over_clearance(entry, Turn::Right, edge, UniformCurrent{{0, -0.2}}, kBoat, 1e-3);
    EXPECT_LT(pushed, 1.0 - 0.5);
    const double held = hard_over_clearance(entry, Turn::Right, edge, UniformCurrent{{0, 0.2}}, kBoat, 1e-3);
    EXPECT_GT(held, 1.0);
}

TEST(Dynamics, EdgeClearanceSignsAndEndpoints) {
    const EdgeClearance c(Segment{{0, 0}, {10, 0}}, Vec2{5, 3});
    EXPECT_DOUBLE_EQ(c({5, 2}), 2.0);
    EXPECT_DOUBLE_EQ(c({5, -1.5}), -1.5);
    EXPECT_DOUBLE_EQ(c({13, -4}), 5.0);
}

TEST(DynamicsProperty, MirrorSymmetry) {
    renew::testing::Gen g(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 c{g.uniform(-0.5, 0.5), g.uniform(-0.5, 0.5)};
        const double h = g.uniform(-3, 3);
        const double w = g.uniform(-1, 1) * kBoat.omega_max;
        const auto a = integrate(VehicleState{{0, 0}, h}, w, ConstantSource{c}, kBoat, 0.01, 12.0);
        const auto b = integrate(VehicleState{{0, 0}, -h}, -w, ConstantSource{{c.x, -c.y}}, kBoat, 0.01, 12.0);
        for (std::size_t i = 0; i < a.states.size(); ++i) {
            EXPECT_NEAR(a.states[i].position.x, b.states[i].position.x, 1e-9);
            EXPECT_NEAR(a.states[i].position.y, -b.states[i].position.y, 1e-9);
        }
    }
}

TEST(Dynamics, BestEffortSamplesAreReproducible) {
    const CurrentField field = CurrentField::uniform({0.3, 0.1}, 0.2, 0.05);
    const Polygon region{{0, 0}, {10, 0}, {5, 8}};
    const Segment edge{{-20, -3}, {20, -3}};
    const auto a = best_effort_distance_samples(region, {5, 2}, 0.0, field, kBoat, edge, 200);
    const auto b = best_effort_distance_samples(region, {5, 2}, 0.0, field, kBoat, edge, 200);
    EXPECT_EQ(a, b);
    BestEffortConfig other;
    other.seed = 77;
    EXPECT_NE(a, best_effort_distance_samples(region, {5, 2}, 0.0, field, kBoat, edge, 200, other));
}

TEST(Dynamics, DegenerateDistributionGivesIdenticalSamples) {
    const CurrentField field = CurrentField::uniform({0.3, 0.1});
    const Polygon region{{0, 0}, {10, 0}, {5, 8}};
    BestEffortConfig cfg;
    cfg.heading_spread = 0.0;
    const auto s = best_effort_distance_samples(region, {5, 2}, 0.0, field, kBoat, Segment{{-20, -3}, {20, -3}}, 50, cfg);
    EXPECT_EQ(spread(s), 0.0);
}

TEST(Dynamics, NoiseWidensTheSampleSpread) {
    const Polygon region{{0, 0}, {10, 0}, {5, 8}};
    const Segment edge{{-20, -3}, {20, -3}};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        BestEffortConfig cfg;
        cfg.seed = seed;
        const auto calm =
            best_effort_distance_samples(region, {5, 2}, 0.0, CurrentField::uniform({0.3, -0.2}), kBoat, edge, 200, cfg);
        const auto noisy = best_effort_distance_samples(region, {5, 2}, 0.0, CurrentField::uniform({0.3, -0.2}, 0.4, 0.15),
                                                        kBoat, edge, 200, cfg);
        EXPECT_GT(spread(noisy), spread(calm)) << seed;
    }
}

TEST(Dynamics, SeedMixingSeparatesStreams) {
    EXPECT_NE(mix_seed(1), mix_seed(2));
    EXPECT_NE(mix_seed(5, 0), mix_seed(5, 1));
    EXPECT_EQ(mix_seed(5, 1), mix_seed(5, 1));
}
