#pragma once

// Environment file format (JSON):
//
//   {
//     "name": "four-gyre",
//     "bounds": [xmin, ymin, xmax, ymax],
//     "obstacles": [ [[x, y], ...], ... ],
//     "field": { "type": "grid", "origin": [x, y], "spacing": h, "rows": [ [[vx, vy], ...], ... ] }
//            | { "type": "analytic", "spacing": h, "generator": "...", ...params }
//            | { "type": "csv", "path": "cur.csv", "origin": [x, y], "spacing": h, "nx": n, "ny": m },
//     "noise": { "sigma_dir": rad, "sigma_mag": m/s },
//     "vehicle": { "v_thrust": m/s, "omega_max": rad/s, "length": m },
//     "start": [x, y], "goal": [x, y]          (optional mission defaults)
//   }
//
// Grid rows are indexed by y (row j holds nodes j * nx .. j * nx + nx - 1). The CSV form
// has a header line followed by "x_index,y_index,vx,vy" records.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "renew/env.hpp"
#include "renew/fields.hpp"

namespace renew {

namespace detail {

inline Vec2 json_point(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline CurrentField field_from_csv(const std::filesystem::path& path, const nlohmann::json& spec,
                                   double sigma_dir, double sigma_mag) {
    std::ifstream in(path);
    if (!in) fail("cannot open current CSV '" + path.string() + "'");
    const int nx = spec.at("nx").get<int>();
    const int ny = spec.at("ny").get<int>();
    if (nx < 1 || ny < 1) fail("current CSV: nx and ny must be positive");
    std::vector<Vec2> data(static_cast<std::size_t>(nx) * ny);
    std::vector<char> seen(data.size(), 0);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (line_no == 1 && line.find_first_of("xX") != std::string::npos &&
            line.find_first_of("0123456789") == std::string::npos)
            continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (double& v : vals) {
            if (!std::getline(row, cell, ',')) fail("current CSV line " + std::to_string(line_no) + ": expected 4 columns");
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                fail("current CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        const int i = static_cast<int>(vals[0]);
        const int j = static_cast<int>(vals[1]);
        if (i < 0 || i >= nx || j < 0 || j >= ny)
            fail("current CSV line " + std::to_string(line_no) + ": index out of range");
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        data[k] = {vals[2], vals[3]};
        seen[k] = 1;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
        if (!seen[k])
            fail("current CSV: missing cell (" + std::to_string(k % nx) + ", " + std::to_string(k / nx) + ")");
    return CurrentField(nx, ny, json_point(spec.at("origin")), spec.at("spacing").get<double>(), std::move(data),
                        sigma_dir, sigma_mag);
}

}  // namespace detail

/// Parses and validates an environment document. Relative CSV paths resolve against
/// `base_dir`.
inline Environment environment_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
    Environment env;
    try {
        env.name = j.value("name", std::string("unnamed"));
        const auto& b = j.at("bounds");
        env.bounds = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
        if (j.contains("obstacles"))
            for (const auto& poly : j.at("obstacles")) {
                Polygon p;
                for (const auto& v : poly) p.push_back(detail::json_point(v));
                env.obstacles.push_back(std::move(p));
            }
        double sigma_dir = 0.0, sigma_mag = 0.0;
        if (j.contains("noise")) {
            sigma_dir = j.at("noise").value("sigma_dir", 0.0);
            sigma_mag = j.at("noise").value("sigma_mag", 0.0);
        }
        if (j.contains("field")) {
            const auto& f = j.at("field");
            const std::string type = f.at("type").get<std::string>();
            if (type == "grid") {
                const auto& rows = f.at("rows");
                const int ny = static_cast<int>(rows.size());
                const int nx = ny > 0 ? static_cast<int>(rows.at(0).size()) : 0;
                std::vector<Vec2> data;
                for (int r = 0; r < ny; ++r) {
                    if (static_cast<int>(rows.at(r).size()) != nx)
                        fail("field grid row " + std::to_string(r) + " has inconsistent length");
                    for (const auto& v : rows.at(r)) data.push_back(detail::json_point(v));
                }
                env.field = CurrentField(nx, ny, detail::json_point(f.at("origin")), f.at("spacing").get<double>(),
                                         std::move(data), sigma_dir, sigma_mag);
            } else if (type == "analytic") {
                env.field = fields::rasterize(env.bounds, f.at("spacing").get<double>(),
                                              fields::from_json(f, env.bounds), sigma_dir, sigma_mag);
            } else if (type == "csv") {
                std::filesystem::path p = f.at("path").get<std::string>();
                if (p.is_relative()) p = base_dir / p;
                env.field = detail::field_from_csv(p, f, sigma_dir, sigma_mag);
            } else {
                fail("unknown field type '" + type + "'");
            }
        } else {
            env.field = CurrentField::uniform({0, 0}, sigma_dir, sigma_mag);
        }
        if (j.contains("vehicle")) {
            const auto& v = j.at("vehicle");
            env.vehicle.v_thrust = v.value("v_thrust", env.vehicle.v_thrust);
            env.vehicle.omega_max = v.value("omega_max", env.vehicle.omega_max);
            env.vehicle.length = v.value("length", env.vehicle.length);
        }
        if (j.contains("start")) env.start = detail::json_point(j.at("start"));
        if (j.contains("goal")) env.goal = detail::json_point(j.at("goal"));
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("environment parse failure: ") + e.what());
    }
    validate_environment(env);
    return env;
}

inline Environment load_environment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open environment file '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail("environment parse failure in '" + path.string() + "': " + e.what());
    }
    return environment_from_json(j, path.parent_path());
}

/// Serializes an environment with its field as an explicit grid.
inline nlohmann::json environment_to_json(const Environment& env) {
    nlohmann::json j;
    j["name"] = env.name;
    j["bounds"] = {env.bounds.xmin, env.bounds.ymin, env.bounds.xmax, env.bounds.ymax};
    j["obstacles"] = nlohmann::json::array();
    for (const auto& poly : env.obstacles) {
        nlohmann::json p = nlohmann::json::array();
        for (const auto& v : poly) p.push_back({v.x, v.y});
        j["obstacles"].push_back(p);
    }
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < env.field.ny(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < env.field.nx(); ++c) row.push_back({env.field.node(c, r).x, env.field.node(c, r).y});
        rows.push_back(row);
    }
    j["field"] = {{"type", "grid"},
                  {"origin", {env.field.origin().x, env.field.origin().y}},
                  {"spacing", env.field.spacing()},
                  {"rows", rows}};
    j["noise"] = {{"sigma_dir", env.field.noise_sigma_dir()}, {"sigma_mag", env.field.noise_sigma_mag()}};
    j["vehicle"] = {{"v_thrust", env.vehicle.v_thrust},
                    {"omega_max", env.vehicle.omega_max},
                    {"length", env.vehicle.length}};
    if (env.start) j["start"] = {env.start->x, env.start->y};
    if (env.goal) j["goal"] = {env.goal->x, env.goal->y};
    return j;
}

}  // namespace renew
