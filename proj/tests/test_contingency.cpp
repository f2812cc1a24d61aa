#include <gtest/gtest.h>

#include "support.hpp"

using namespace renew;

namespace {

Environment breakwater() { return scenarios::generate("ablation"); }

Polyline hugging_path() { return {{50.5, 20}, {50.5, 80}}; }

}  // namespace

TEST(Contingency, EmptyWorldNeverCollides) {
    const Environment env = scenarios::generate("empty", {{"magnitude", 0.5}});
    const auto rep = simulate_contingency(Polyline{*env.start, *env.goal}, env, env.vehicle);
    EXPECT_EQ(rep.trials, 81);
    EXPECT_EQ(rep.collisions, 0);
}

TEST(Contingency, HuggingTheBreakwaterCollides) {
    const Environment env = breakwater();
    const auto rep = simulate_contingency(hugging_path(), env, env.vehicle);
    EXPECT_GE(rep.collisions, 1);
    for (const auto* s : rep.collision_sites()) {
        EXPECT_LT(s->left_clearance, 0.0);
        EXPECT_LT(s->right_clearance, 0.0);
    }
}

TEST(Contingency, DeterministicAndReplayable) {
    const Environment env = breakwater();
    const auto a = simulate_contingency(hugging_path(), env, env.vehicle);
    const auto b = simulate_contingency(hugging_path(), env, env.vehicle);
    ASSERT_EQ(a.stations.size(), b.stations.size());
    for (std::size_t i = 0; i < a.stations.size(); ++i) {
        EXPECT_EQ(a.stations[i].left_clearance, b.stations[i].left_clearance);
        EXPECT_EQ(a.stations[i].right_clearance, b.stations[i].right_clearance);
    }
    for (const auto* s : a.collision_sites()) {
        const VehicleState entry{s->position, s->heading};
        EXPECT_EQ(contingency_turn(entry, Turn::Left, env, env.vehicle, s->rotation, s->magnitude_delta), s->left_clearance);
        EXPECT_EQ(contingency_turn(entry, Turn::Right, env, env.vehicle, s->rotation, s->magnitude_delta), s->right_clearance);
    }
}

TEST(Contingency, SpacingSetsStationCount) {
    const Environment env = scenarios::generate("empty");
    const Polyline p{{10, 50}, {90, 50}};
    ContingencyConfig one, two;
    two.spacing = 2.0;
    const int a = simulate_contingency(p, env, env.vehicle, one).trials;
    const int b = simulate_contingency(p, env, env.vehicle, two).trials;
    EXPECT_EQ(a, 81);
    EXPECT_NEAR(b, a / 2.0, 1.0);
    two.spacing = 0.0;
    EXPECT_THROW((void)simulate_contingency(p, env, env.vehicle, two), Error);
}

TEST(Contingency, WorldBoundsAreNotObstacles) {
    const Environment env = scenarios::generate("empty");
    const auto rep = simulate_contingency(Polyline{{0.5, 50}, {0.5, 90}}, env, env.vehicle);
    EXPECT_EQ(rep.collisions, 0);
}

TEST(ContingencyProperty, PaddedPlanSaferThanHuggingPath) {
    const Environment env = breakwater();
    const auto res = plan(env, env.vehicle, *env.start, *env.goal);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ContingencyConfig cfg;
        cfg.seed = seed;
        const auto padded = simulate_contingency(res.chosen_path.waypoints, env, env.vehicle, cfg);
        const auto hug = simulate_contingency(hugging_path(), env, env.vehicle, cfg);
        EXPECT_LE(padded.collisions, hug.collisions) << seed;
        EXPECT_EQ(padded.collisions, 0) << seed;
    }
}
