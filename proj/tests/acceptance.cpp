// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "renew/renew.hpp"

namespace fs = std::filesystem;
using namespace renew;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;
};

template <typename... T>
std::string fmtn(const char* f, T... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Polygon box(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

Polygon regular(Vec2 c, double r, int sides, double phase) {
    Polygon p;
    for (int i = 0; i < sides; ++i) p.push_back(c + unit(phase + kTwoPi * i / sides) * r);
    return p;
}

Environment world(const Rect& bounds, std::vector<Polygon> obstacles, CurrentField field = CurrentField::uniform({0, 0})) {
    Environment env;
    env.name = "acceptance";
    env.bounds = bounds;
    env.obstacles = std::move(obstacles);
    env.field = std::move(field);
    validate_environment(env);
    return env;
}

// Disjoint random polygons in a 100 x 100 box.
std::vector<Polygon> random_obstacles(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<Vec2, double>> discs;
    std::vector<Polygon> out;
    for (int attempt = 0; attempt < 400 && static_cast<int>(out.size()) < count; ++attempt) {
        const double r = 4.0 + 10.0 * u(rng);
        const Vec2 c{r + 1.0 + (98.0 - 2.0 * r) * u(rng), r + 1.0 + (98.0 - 2.0 * r) * u(rng)};
        bool clash = false;
        for (const auto& [dc, dr] : discs) clash |= distance(dc, c) < dr + r + 2.0;
        if (clash) continue;
        discs.push_back({c, r});
        out.push_back(regular(c, r * (0.6 + 0.4 * u(rng)), 3 + static_cast<int>(u(rng) * 6), kTwoPi * u(rng)));
    }
    return out;
}

int vertex_id(const NavMesh& m, Vec2 p) {
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        if (distance(m.vertices[i], p) <= 1e-9) return static_cast<int>(i);
    return -1;
}

Outcome c1_fuel() {
    const Polyline p{{0, 0}, {100, 0}};
    const VehicleModel boat{};
    const double a = fuel_cost(p, CurrentField::uniform({0, 0}), boat);
    const double b = fuel_cost(p, CurrentField::uniform({0.5, 0}), boat);
    const double c = fuel_cost(p, CurrentField::uniform({-0.5, 0}), boat);
    auto rel = [](double got, double want) { return std::abs(got - want) / want; };
    return {rel(a, 100.0) <= 1e-6 && rel(b, 200.0 / 3.0) <= 1e-6 && rel(c, 200.0) <= 1e-6,
            fmtn("F = %.6f / %.6f / %.6f", a, b, c)};
}

Outcome c2_dynamics() {
    const VehicleModel boat{};
    const double w = boat.omega_max, v = boat.v_thrust, r = v / w;
    double circle = 0.0;
    for (const auto& s : integrate(VehicleState{{0, 0}, 0.0}, w, UniformCurrent{}, boat, 1e-3, kTwoPi / w).states)
        circle = std::max(circle, std::abs(distance(s.position, {0, r}) - r));
    const Vec2 c{0.3, -0.2};
    double troch = 0.0;
    const auto traj = integrate(VehicleState{{0, 0}, 0.0}, w, CurrentField::uniform(c), boat, 1e-3, 20.0);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double t = traj.dt * static_cast<double>(i);
        const Vec2 want{r * std::sin(w * t) + c.x * t, r * (1.0 - std::cos(w * t)) + c.y * t};
        troch = std::max(troch, distance(traj.states[i].position, want));
    }
    return {circle <= 1e-4 && troch <= 1e-4, fmtn("max circle error %.2e m, max trochoid error %.2e m", circle, troch)};
}

Outcome c3_mesh() {
    std::mt19937_64 rng(3);
    int missing = 0;
    double worst_area = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Environment env = world({0, 0, 100, 100}, random_obstacles(rng, 1 + trial % 8));
        const NavMesh m = build_navmesh(env);
        double area = 0.0;
        for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
            if (m.is_free(t)) area += m.area(t);
        for (const auto& poly : env.obstacles) {
            area += std::abs(signed_area(poly));
            for (std::size_t i = 0; i < poly.size(); ++i)
                missing += m.constrained_edge_id(vertex_id(m, poly[i]), vertex_id(m, poly[(i + 1) % poly.size()])) < 0;
        }
        worst_area = std::max(worst_area, std::abs(area - env.bounds.area()) / env.bounds.area());
    }
    int euler_bad = 0;
    for (int h = 0; h <= 4; ++h) {
        std::vector<Polygon> holes;
        int verts = 4, hole_tris = 0;
        for (int k = 0; k < h; ++k) {
            const int sides = 3 + k;
            holes.push_back(regular({15.0 + 20.0 * k, 50.0}, 6.0, sides, 0.1));
            verts += sides;
            hole_tris += sides - 2;
        }
        const NavMesh m = build_navmesh(Rect{0, 0, 100, 100}, holes);
        euler_bad += static_cast<int>(m.free_count()) != verts + 2 * h - 2;
        euler_bad += static_cast<int>(m.triangle_count() - m.free_count()) != hole_tris;
    }
    return {missing == 0 && worst_area <= 1e-6 && euler_bad == 0,
            fmtn("missing constrained edges %d, worst area error %.1e, Euler mismatches %d", missing, worst_area, euler_bad)};
}

Outcome c4_homotopy() {
    auto channels = [](const std::vector<Polygon>& obs, Vec2 s, Vec2 g, int k) {
        const NavMesh m = build_navmesh(Rect{0, 0, 100, 100}, obs);
        return std::pair{m, enumerate_channels(build_dual(m), m, s, g, k)};
    };
    const std::size_t empty = channels({}, {10, 10}, {90, 90}, 8).second.channels.size();
    const std::size_t one = channels({box(40, 40, 60, 60)}, {10, 50}, {90, 50}, 4).second.channels.size();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.05, 0.95), y(1.0, 99.0);
    int dup = 0, mismatched = 0, over = 0, sampled = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const auto obs = random_obstacles(rng, 1 + trial % 4);
        const Vec2 s{1.0, y(rng)}, g{99.0, y(rng)};
        const auto [m, set] = channels(obs, s, g, 16);
        std::set<HomotopySignature> seen;
        for (const auto& ch : set.channels) dup += !seen.insert(ch.signature).second;
        over += set.channels.size() > (std::size_t{1} << obs.size());
        for (const auto& ch : set.channels)
            for (int i = 0; i < 10; ++i) {
                Polyline p{s};
                for (const auto& e : ch.passing_edges) p.push_back(e.at(u(rng)));
                p.push_back(g);
                mismatched += path_signature(p, set.rays) != ch.signature;
                ++sampled;
            }
    }
    return {empty == 1 && one == 2 && dup == 0 && mismatched == 0 && over == 0 && sampled >= 100,
            fmtn("empty %zu, one obstacle %zu, duplicates %d, %d/%d sampled paths off-signature, over 2^n %d", empty, one,
                 dup, mismatched, sampled, over)};
}

Outcome c5_padding_bound() {
    const Environment env = scenarios::generate("ablation");
    const NavMesh mesh = build_navmesh(env);
    const auto chans = enumerate_channels(build_dual(mesh), mesh, *env.start, *env.goal, 16).channels;
    const double limit = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 2000.0);
    double worst = 0.0;
    bool monotone = true;
    std::vector<double> prev;
    for (const double sigma : {0.5, 0.8, 0.9, 0.95, 0.99}) {
        PaddingConfig pc;
        pc.sigma = sigma;
        const auto rep = compute_adaptive_padding(chans[0], mesh, env, env.vehicle, *env.start, *env.goal, pc);
        std::vector<double> offs;
        for (const auto& e : rep.edges) offs.push_back(e.offset);
        if (!prev.empty())
            for (std::size_t i = 0; i < offs.size(); ++i) monotone &= offs[i] >= prev[i];
        prev = offs;
        if (sigma == 0.95)
            for (const auto& e : rep.edges)
                worst = std::max(worst, encroachment_frequency(e, mesh, env.field, env.vehicle, 2000, 777 + e.edge_id));
    }
    const Environment calm = scenarios::generate("ablation", {{"magnitude", 0.0}, {"sigma_dir", 0.0}, {"sigma_mag", 0.0}});
    const NavMesh cm = build_navmesh(calm);
    const auto cch = enumerate_channels(build_dual(cm), cm, *calm.start, *calm.goal, 1).channels;
    bool degenerate = true;
    std::vector<double> first;
    for (const double sigma : {0.5, 0.8, 0.9, 0.95, 0.99}) {
        PaddingConfig pc;
        pc.sigma = sigma;
        pc.best_effort.heading_spread = 0.0;
        std::vector<double> offs;
        for (const auto& e : compute_adaptive_padding(cch[0], cm, calm, calm.vehicle, *calm.start, *calm.goal, pc).edges)
            offs.push_back(e.offset);
        if (first.empty()) first = offs;
        degenerate &= offs == first;
    }
    return {worst <= limit && monotone && degenerate,
            fmtn("max encroachment frequency %.4f (limit %.4f), monotone %s, degenerate sigma-invariant %s", worst, limit,
                 monotone ? "yes" : "no", degenerate ? "yes" : "no")};
}

Outcome c6_asymmetry() {
    auto offset = [](double direction_deg) {
        const CurrentField field =
            fields::rasterize({0, 0, 100, 100}, 2.0, fields::uniform(direction_deg * kPi / 180.0, 0.5), 0.1, 0.03);
        BestEffortConfig cfg;
        cfg.seed = 5;
        const Polygon region{{40, 40}, {60, 40}, {50, 48}};
        return quantile(encroachment_samples(Segment{{80, 50}, {20, 50}}, region, 0.0, field, VehicleModel{}, 500, cfg),
                        0.95);
    };
    const double toward = offset(150.0), away = offset(-150.0);
    return {toward > 1.5 * away,
            fmtn("toward %.3f m, away %.3f m, ratio %.1f", toward, away, away > 0 ? toward / away : INFINITY)};
}

Outcome c7_budget() {
    const Environment env = scenarios::generate("four-gyre");
    PlanConfig cfg;
    cfg.k = 1;
    const double one = plan(env, env.vehicle, *env.start, *env.goal, cfg).metrics.fuel;
    cfg.k = 16;
    const double many = plan(env, env.vehicle, *env.start, *env.goal, cfg).metrics.fuel;
    return {many < one && many / one <= 0.9, fmtn("fuel k=1 %.2f, k=16 %.2f, ratio %.3f", one, many, many / one)};
}

struct Comparison {
    PlanResult renew;
    BaselineResult grid;
};

Comparison compare(const Environment& env) {
    Comparison c{plan(env, env.vehicle, *env.start, *env.goal), {}};
    const Grid grid = rasterize(env, 2.0, adaptive_band(c.renew));
    c.grid = run_baseline(env, grid, *env.start, *env.goal, Motion::Dubins, FuelModel{}, PlanConfig{}.seed);
    return c;
}

Outcome c8_baseline() {
    const auto gyre = compare(scenarios::generate("four-gyre"));
    const auto abl = compare(scenarios::generate("ablation"));
    const double rf = gyre.renew.metrics.fuel_per_distance, sf = gyre.grid.smoothed_metrics.fuel_per_distance;
    const double ra = abl.renew.metrics.fuel, sa = abl.grid.smoothed_metrics.fuel;
    return {rf < sf && ra < sa, fmtn("four-gyre F/D %.3f vs %.3f; ablation fuel %.2f vs %.2f", rf, sf, ra, sa)};
}

Outcome c9_states() {
    const Environment env = scenarios::generate("four-gyre");
    const int renew_states = plan(env, env.vehicle, *env.start, *env.goal).metrics.states;
    const Grid grid = rasterize(env, 2.0);
    const auto dubins = astar(grid, *env.start, *env.goal, Motion::Dubins);
    const auto eight = astar(grid, *env.start, *env.goal, Motion::EightConnected);
    return {dubins.found && 100 * static_cast<std::size_t>(renew_states) <= dubins.reached,
            fmtn("RENEW %d states, grid A* %zu reached (8-connected %zu), ratio %.0f", renew_states, dubins.reached,
                 eight.reached, static_cast<double>(dubins.reached) / renew_states)};
}

Outcome c10_contingency() {
    int renew_collisions = 0, trials = 0;
    for (const char* name : {"four-gyre", "strait"}) {
        const Environment env = scenarios::generate(name);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            PlanConfig pc;
            pc.seed = seed;
            const auto res = plan(env, env.vehicle, *env.start, *env.goal, pc);
            ContingencyConfig cc;
            cc.seed = seed;
            const auto rep = simulate_contingency(res.chosen_path.waypoints, env, env.vehicle, cc);
            renew_collisions += rep.collisions;
            trials += rep.trials;
        }
    }
    const Environment abl = scenarios::generate("ablation");
    const auto hug = simulate_contingency(Polyline{{50.5, 20}, {50.5, 80}}, abl, abl.vehicle);
    return {renew_collisions == 0 && hug.collisions >= 1,
            fmtn("RENEW %d collisions in %d trials; hugging path %d of %d", renew_collisions, trials, hug.collisions,
                 hug.trials)};
}

Outcome c11_harmonic() {
    auto group = [](std::vector<double> fuels) {
        std::vector<CandidatePath> g;
        for (std::size_t i = 0; i < fuels.size(); ++i) {
            CandidatePath p;
            p.index = static_cast<int>(i);
            p.fuel = fuels[i];
            g.push_back(p);
        }
        return g;
    };
    const std::vector<std::vector<CandidatePath>> hand{group({100, 200}), group({120, 130})};
    const bool example = select_homotopy(hand) == 1;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> fuel(10.0, 300.0), scale(0.1, 10.0);
    std::uniform_int_distribution<int> count(1, 6);
    int changed = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::vector<CandidatePath>> groups(static_cast<std::size_t>(count(rng)));
        for (auto& g : groups) {
            std::vector<double> f(static_cast<std::size_t>(count(rng)));
            for (double& x : f) x = fuel(rng);
            g = group(f);
        }
        const std::size_t before = select_homotopy(groups);
        const double lambda = scale(rng);
        for (auto& g : groups)
            for (auto& p : g) p.fuel *= lambda;
        changed += select_homotopy(groups) != before;
    }
    return {example && changed == 0, fmtn("hand example selects set %d, argmin changed in %d/1000 scalings",
                                          example ? 2 : 1, changed)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome c12_determinism() {
    const fs::path root = fs::temp_directory_path() / "renew_acceptance";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"plan --scenario four-gyre --k 1 --k 16", {"metrics.csv"}},
        {"compare --scenario ablation", {"comparison.csv"}},
        {"padding-report --scenario four-gyre", {"padding.csv", "padding_channels.csv"}},
        {"contingency --scenario strait", {"contingency.csv", "contingency_summary.csv"}},
        {"mesh-dump --scenario four-gyre", {"mesh.csv"}},
    };
    int differing = 0, failed = 0, files = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        fs::path dirs[2] = {root / ("a" + std::to_string(i)), root / ("b" + std::to_string(i))};
        for (const auto& d : dirs) {
            const std::string cmd = std::string("\"") + RENEW_CLI_PATH + "\" " + runs[i].first + " --out \"" + d.string() +
                                    "\" > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            failed += !(WIFEXITED(status) && WEXITSTATUS(status) == 0);
        }
        for (const auto& f : runs[i].second) {
            ++files;
            differing += !fs::exists(dirs[0] / f) || slurp(dirs[0] / f) != slurp(dirs[1] / f);
        }
    }
    return {failed == 0 && differing == 0,
            fmtn("%zu commands twice, %d CSV files compared, %d differ, %d runs failed", runs.size(), files, differing,
                 failed)};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "fuel-integral oracle", 1.0, c1_fuel},
        {2, "dynamics oracle", 5.0, c2_dynamics},
        {3, "mesh invariants", 30.0, c3_mesh},
        {4, "homotopy correctness", 60.0, c4_homotopy},
        {5, "padding probabilistic bound", 300.0, c5_padding_bound},
        {6, "directional asymmetry", 120.0, c6_asymmetry},
        {7, "homotopy-budget benefit", 600.0, c7_budget},
        {8, "baseline ordering", 600.0, c8_baseline},
        {9, "states gap", 300.0, c9_states},
        {10, "contingency safety", 600.0, c10_contingency},
        {11, "harmonic-mean selection", 5.0, c11_harmonic},
        {12, "determinism", 600.0, c12_determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("%s %2d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                    secs, c.limit_s, in_time ? "" : ", over time");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
