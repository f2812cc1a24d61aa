// renew_cli: plan, compare, padding-report, contingency, mesh-dump, scenario export and
// check-csv. Exit codes: 0 success, 2 bad input, 3 no feasible plan.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "renew/renew.hpp"

#ifndef RENEW_DATA_DIR
#define RENEW_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace renew;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitNoPlan = 3;

struct RunConfig {
    std::string env_path;
    std::string scenario;
    std::string scenario_params{"{}"};
    std::vector<int> k{16};
    int samples{500};
    double sigma{0.95};
    double alpha{1.0};
    double drag_exp{2.0};
    double resolution{2.0};
    double spacing{1.0};
    std::string padding{"adaptive"};
    int padding_samples{500};
    std::uint64_t seed{PlanConfig{}.seed};
    std::uint64_t trial_seed{ContingencyConfig{}.seed};
    bool no_noise{false};
    std::string motion{"dubins"};
    std::string result_path;
    std::string out{"out"};
};

fs::path data_dir() {
    if (const char* d = std::getenv("RENEW_DATA_DIR")) return d;
    return RENEW_DATA_DIR;
}

Environment load_env(const RunConfig& rc) {
    if (!rc.env_path.empty() && !rc.scenario.empty()) fail("give either --env or --scenario, not both");
    if (!rc.env_path.empty()) {
        if (!fs::exists(rc.env_path)) fail("environment file not found: '" + rc.env_path + "'");
        return load_environment(rc.env_path);
    }
    if (rc.scenario.empty()) fail("no environment: pass --env <file> or --scenario <name>");
    for (const auto& n : scenarios::packaged_names())
        if (n == rc.scenario) return scenarios::load_packaged(n, data_dir());
    nlohmann::json params;
    try {
        params = nlohmann::json::parse(rc.scenario_params);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("--params is not valid JSON: ") + e.what());
    }
    return scenarios::generate(rc.scenario, params);
}

std::pair<Vec2, Vec2> endpoints(const Environment& env) {
    if (!env.start || !env.goal) fail("environment '" + env.name + "' has no start/goal");
    return {*env.start, *env.goal};
}

PlanConfig plan_config(const RunConfig& rc, int k) {
    PlanConfig cfg;
    cfg.k = k;
    cfg.n_samples = rc.samples;
    cfg.sigma = rc.sigma;
    cfg.fuel = {rc.alpha, rc.drag_exp};
    cfg.padding = PaddingScheme::parse(rc.padding);
    cfg.padding_samples = rc.padding_samples;
    cfg.seed = rc.seed;
    if (k < 1) fail("--k must be >= 1");
    if (rc.samples < 1) fail("--samples must be >= 1");
    if (!(rc.sigma > 0.0 && rc.sigma < 1.0)) fail("--sigma must lie in (0, 1)");
    if (!(rc.alpha > 0.0)) fail("--alpha must be > 0");
    if (!(rc.drag_exp >= 1.0)) fail("--drag-exp must be >= 1");
    return cfg;
}

void write_csv(const fs::path& path, const csv::Table& t) { io::write_text(path, csv::format(t)); }

void write_json(const fs::path& path, const nlohmann::json& j) { io::write_text(path, j.dump(1) + "\n"); }

int cmd_plan(const RunConfig& rc) {
    const Environment env = load_env(rc);
    const auto [start, goal] = endpoints(env);
    const fs::path out = rc.out;
    auto metrics = io::empty_table(csv::schemas::metrics());
    const bool many = rc.k.size() > 1;
    for (const int k : rc.k) {
        const PlanConfig cfg = plan_config(rc, k);
        const PlanResult r = plan(env, env.vehicle, start, goal, cfg);
        const std::string tag = many ? "_k" + std::to_string(k) : "";
        write_json(out / ("result" + tag + ".json"), io::result_json(r, env, cfg));
        io::write_text(out / ("plan" + tag + ".svg"), io::plan_svg(r, env));
        metrics.rows.push_back(io::metrics_row("RENEW", k, r.metrics));
        std::printf("k=%d channel %d fuel %.3f length %.3f F/D %.4f safety %.3f states %d\n", k,
                    r.chosen_channel().channel.id, r.metrics.fuel, r.metrics.length, r.metrics.fuel_per_distance,
                    r.metrics.safety, r.metrics.states);
    }
    write_csv(out / "metrics.csv", metrics);
    return kExitOk;
}

std::vector<BandConstraint> baseline_band(const RunConfig& rc, const Environment& env, const PlanResult* renew_result) {
    const PaddingScheme scheme = PaddingScheme::parse(rc.padding);
    switch (scheme.kind) {
        case PaddingScheme::Kind::None: return {};
        case PaddingScheme::Kind::Fixed: return fixed_band(env, scheme.distance);
        case PaddingScheme::Kind::Adaptive: return renew_result ? adaptive_band(*renew_result) : std::vector<BandConstraint>{};
    }
    return {};
}

Motion parse_motion(const std::string& m) {
    if (m == "dubins") return Motion::Dubins;
    if (m == "eight") return Motion::EightConnected;
    fail("--motion must be 'dubins' or 'eight'");
}

int cmd_compare(const RunConfig& rc) {
    const Environment env = load_env(rc);
    const auto [start, goal] = endpoints(env);
    const fs::path out = rc.out;
    const PlanConfig cfg = plan_config(rc, rc.k.back());
    const Motion motion = parse_motion(rc.motion);
    if (!(rc.resolution > 0.0)) fail("--resolution must be > 0");
    auto table = io::empty_table(csv::schemas::comparison());

    std::optional<PlanResult> renew_result;
    try {
        renew_result = plan(env, env.vehicle, start, goal, cfg);
        table.rows.push_back(io::comparison_row("RENEW", renew_result->metrics));
        write_json(out / "result_renew.json", io::result_json(*renew_result, env, cfg));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::BadInput) throw;
        table.rows.push_back(io::comparison_failure("RENEW", e.what()));
    }

    std::optional<BaselineResult> base;
    try {
        const Grid grid = rasterize(env, rc.resolution, baseline_band(rc, env, renew_result ? &*renew_result : nullptr));
        base = run_baseline(env, grid, start, goal, motion, cfg.fuel, rc.seed);
        table.rows.push_back(io::comparison_row("grid A*-O", base->raw_metrics));
        table.rows.push_back(io::comparison_row("grid A*-S", base->smoothed_metrics));
        write_json(out / "result_astar_o.json", io::baseline_json("grid A*-O", base->raw.path, base->raw_metrics, env));
        write_json(out / "result_astar_s.json", io::baseline_json("grid A*-S", base->smoothed, base->smoothed_metrics, env));
    } catch (const Error& e) {
        table.rows.push_back(io::comparison_failure("grid A*-O", e.what()));
        table.rows.push_back(io::comparison_failure("grid A*-S", e.what()));
    }

    write_csv(out / "comparison.csv", table);
    io::write_text(out / "compare.svg",
                   io::compare_svg(env, start, goal, renew_result ? &renew_result->chosen_path.waypoints : nullptr,
                                   base ? &base->smoothed : nullptr));
    for (const auto& row : table.rows)
        std::printf("%-10s %-6s fuel %s F/D %s states %s\n", row[0].c_str(), row[1].c_str(), row[2].c_str(),
                    row[5].c_str(), row[6].c_str());
    return kExitOk;
}

int cmd_padding_report(const RunConfig& rc) {
    const Environment env = load_env(rc);
    const auto [start, goal] = endpoints(env);
    const PlanConfig cfg = plan_config(rc, rc.k.back());
    const NavMesh mesh = build_navmesh(env);
    const ChannelSet cs = enumerate_channels(build_dual(mesh), mesh, start, goal, cfg.k, cfg.search_budget);
    PaddingConfig pcfg;
    pcfg.sigma = cfg.sigma;
    pcfg.n_samples = cfg.padding_samples;
    pcfg.pad_bounds = cfg.pad_bounds;
    pcfg.best_effort.heading_spread = cfg.heading_spread;
    pcfg.best_effort.seed = mix_seed(cfg.seed, 0x9ADu);
    PaddingCache cache;
    std::vector<ChannelOutcome> outcomes;
    for (const auto& ch : cs.channels) {
        ChannelOutcome o;
        o.channel = ch;
        o.padding = compute_padding(cfg.padding, ch, mesh, env, env.vehicle, start, goal, pcfg, &cache);
        o.padded = apply_padding(ch, o.padding, mesh, env.vehicle);
        record_padding(o.padding, o.padded);
        std::printf("channel %d %s: %zu edges, %s\n", ch.id, ch.signature.to_string().c_str(), o.padding.edges.size(),
                    o.padded.feasible ? "feasible" : "blocked");
        outcomes.push_back(std::move(o));
    }
    const fs::path out = rc.out;
    write_csv(out / "padding.csv", io::padding_table(outcomes));
    write_csv(out / "padding_channels.csv", io::padding_channel_table(outcomes));
    return kExitOk;
}

Polyline read_result_path(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open result file '" + path.string() + "'");
    try {
        nlohmann::json j;
        in >> j;
        Polyline p;
        for (const auto& v : j.at("chosen").at("waypoints")) p.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        if (p.size() < 2) fail("result file '" + path.string() + "' has fewer than two waypoints");
        return p;
    } catch (const nlohmann::json::exception& e) {
        fail("result file '" + path.string() + "': " + e.what());
    }
}

int cmd_contingency(const RunConfig& rc) {
    const Environment env = load_env(rc);
    Polyline path;
    std::string planner = "RENEW";
    if (!rc.result_path.empty()) {
        path = read_result_path(rc.result_path);
        planner = "result";
    } else {
        const auto [start, goal] = endpoints(env);
        path = plan(env, env.vehicle, start, goal, plan_config(rc, rc.k.back())).chosen_path.waypoints;
    }
    ContingencyConfig cc;
    cc.spacing = rc.spacing;
    cc.seed = rc.trial_seed;
    cc.noise = !rc.no_noise;
    const ContingencyReport rep = simulate_contingency(path, env, env.vehicle, cc);
    const fs::path out = rc.out;
    write_csv(out / "contingency.csv", io::contingency_table(rep));
    auto summary = io::empty_table(csv::schemas::contingency_summary());
    summary.rows.push_back(io::contingency_summary_row(planner, rep, cc));
    write_csv(out / "contingency_summary.csv", summary);
    io::write_text(out / "contingency.svg", io::contingency_svg(env, path, rep));
    std::printf("trials %d collisions %d\n", rep.trials, rep.collisions);
    return kExitOk;
}

int cmd_mesh_dump(const RunConfig& rc) {
    const Environment env = load_env(rc);
    const NavMesh mesh = build_navmesh(env);
    const fs::path out = rc.out;
    write_csv(out / "mesh.csv", io::mesh_table(mesh));
    io::write_text(out / "mesh.svg", io::mesh_svg(mesh, env));
    std::printf("vertices %zu triangles %zu constrained edges %zu\n", mesh.vertices.size(), mesh.triangles.size(),
                mesh.constrained_edges.size());
    return kExitOk;
}

int cmd_scenario_export(const std::string& name, const std::string& params_text, const std::string& out) {
    nlohmann::json doc;
    bool packaged = false;
    for (const auto& n : scenarios::packaged_names()) packaged |= n == name;
    if (packaged) {
        const fs::path p = scenarios::packaged_path(name, data_dir());
        std::ifstream in(p);
        if (!in) fail("cannot open packaged scenario '" + p.string() + "'");
        in >> doc;
    } else {
        nlohmann::json params;
        try {
            params = nlohmann::json::parse(params_text);
        } catch (const nlohmann::json::exception& e) {
            fail(std::string("--params is not valid JSON: ") + e.what());
        }
        doc = scenarios::document(name, params);
    }
    (void)environment_from_json(doc);
    if (out.empty() || out == "-") {
        std::cout << doc.dump(1) << "\n";
    } else {
        write_json(out, doc);
    }
    return kExitOk;
}

int cmd_check_csv(const std::string& schema_name, const std::string& file) {
    const csv::Schema* schema = csv::schemas::find(schema_name);
    if (!schema) fail("unknown schema '" + schema_name + "'");
    std::ifstream in(file, std::ios::binary);
    if (!in) fail("cannot open '" + file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const auto errs = csv::validate(ss.str(), *schema);
    for (const auto& e : errs) std::fprintf(stderr, "%s\n", e.c_str());
    if (!errs.empty()) return kExitBadInput;
    std::printf("%s: ok\n", file.c_str());
    return kExitOk;
}

void add_env_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--env", rc.env_path, "environment file (JSON)");
    sub->add_option("--scenario", rc.scenario, "built-in or packaged scenario name");
    sub->add_option("--params", rc.scenario_params, "scenario parameters as a JSON object");
    sub->add_option("--out", rc.out, "output directory")->capture_default_str();
}

void add_plan_options(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--k", rc.k, "homotopy class budget (repeatable)")->capture_default_str();
    sub->add_option("--samples", rc.samples, "paths sampled per channel")->capture_default_str();
    sub->add_option("--sigma", rc.sigma, "padding bound")->capture_default_str();
    sub->add_option("--alpha", rc.alpha, "fuel coefficient")->capture_default_str();
    sub->add_option("--drag-exp", rc.drag_exp, "drag exponent")->capture_default_str();
    sub->add_option("--padding", rc.padding, "adaptive, none or fixed:<d>")->capture_default_str();
    sub->add_option("--padding-samples", rc.padding_samples, "hard-over samples per edge")->capture_default_str();
    sub->add_option("--seed", rc.seed, "planner seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RENEW risk- and energy-aware path planner"};
    app.set_config("--config", "", "TOML/INI config file; command-line flags take precedence");
    app.require_subcommand(1);
    RunConfig rc;

    auto* plan_cmd = app.add_subcommand("plan", "plan a path; writes result, metrics CSV and SVG");
    add_env_options(plan_cmd, rc);
    add_plan_options(plan_cmd, rc);

    auto* compare_cmd = app.add_subcommand("compare", "RENEW against grid A* (original and smoothed)");
    add_env_options(compare_cmd, rc);
    add_plan_options(compare_cmd, rc);
    compare_cmd->add_option("--resolution", rc.resolution, "grid resolution (m)")->capture_default_str();
    compare_cmd->add_option("--motion", rc.motion, "grid motion model: dubins or eight")->capture_default_str();

    auto* padding_cmd = app.add_subcommand("padding-report", "per-edge padding offsets for every channel");
    add_env_options(padding_cmd, rc);
    add_plan_options(padding_cmd, rc);

    auto* cont_cmd = app.add_subcommand("contingency", "hard-over abort drills along a path");
    add_env_options(cont_cmd, rc);
    add_plan_options(cont_cmd, rc);
    cont_cmd->add_option("--result", rc.result_path, "result file to drill (default: plan afresh)");
    cont_cmd->add_option("--spacing", rc.spacing, "station spacing (m)")->capture_default_str();
    cont_cmd->add_option("--trial-seed", rc.trial_seed, "seed for per-trial current draws")->capture_default_str();
    cont_cmd->add_flag("--no-noise", rc.no_noise, "use the mean field in every trial");

    auto* mesh_cmd = app.add_subcommand("mesh-dump", "triangulation as CSV and SVG");
    add_env_options(mesh_cmd, rc);

    std::string export_name, export_params{"{}"}, export_out;
    auto* scen_cmd = app.add_subcommand("scenario", "scenario utilities");
    scen_cmd->require_subcommand(1);
    auto* export_cmd = scen_cmd->add_subcommand("export", "write a scenario's environment file");
    export_cmd->add_option("name", export_name, "scenario name")->required();
    export_cmd->add_option("--params", export_params, "generator parameters as a JSON object");
    export_cmd->add_option("--out", export_out, "output file ('-' for stdout)");

    std::string schema_name, csv_file;
    auto* check_cmd = app.add_subcommand("check-csv", "validate a CSV against its schema");
    check_cmd->add_option("schema", schema_name, "schema name")->required();
    check_cmd->add_option("file", csv_file, "CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (*plan_cmd) return cmd_plan(rc);
        if (*compare_cmd) return cmd_compare(rc);
        if (*padding_cmd) return cmd_padding_report(rc);
        if (*cont_cmd) return cmd_contingency(rc);
        if (*mesh_cmd) return cmd_mesh_dump(rc);
        if (*export_cmd) return cmd_scenario_export(export_name, export_params, export_out);
        if (*check_cmd) return cmd_check_csv(schema_name, csv_file);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.kind() == ErrorKind::NoFeasiblePlan ? kExitNoPlan : kExitBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadInput;
    }
    return kExitBadInput;
}
