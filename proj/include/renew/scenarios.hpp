#pragma once

// Built-in scenarios. Each generator emits an environment document (the same JSON the
// loader reads), so `scenario export` and `generate` share one definition.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/env_io.hpp"

namespace renew::scenarios {

using nlohmann::json;

namespace detail {

inline json polygon(std::initializer_list<Vec2> pts) {
    json p = json::array();
    for (const auto& v : pts) p.push_back({v.x, v.y});
    return p;
}

inline json regular_polygon(Vec2 c, double radius, int sides, double phase) {
    json p = json::array();
    for (int i = 0; i < sides; ++i) {
        const Vec2 v = c + unit(phase + kTwoPi * i / sides) * radius;
        p.push_back({v.x, v.y});
    }
    return p;
}

inline json noise(const json& params, double dir, double mag) {
    return {{"sigma_dir", params.value("sigma_dir", dir)}, {"sigma_mag", params.value("sigma_mag", mag)}};
}

}  // namespace detail

/// 200 x 200 m, four counter-rotating gyres, a quadrilateral island on each gyre centre
/// and a hexagon in the middle. Parameters: amplitude, spacing, hex_radius, sigma_dir,
/// sigma_mag, start, goal.
inline json four_gyre(const json& params = json::object()) {
    json doc;
    doc["name"] = "four-gyre";
    doc["bounds"] = {0, 0, 200, 200};
    doc["obstacles"] = json::array({
        detail::polygon({{36, 38}, {63, 35}, {65, 62}, {38, 64}}),
        detail::polygon({{137, 36}, {164, 39}, {162, 64}, {135, 61}}),
        detail::polygon({{38, 136}, {62, 138}, {64, 163}, {36, 161}}),
        detail::polygon({{138, 137}, {163, 135}, {165, 162}, {136, 164}}),
        detail::regular_polygon({100, 100}, params.value("hex_radius", 14.0), 6, kPi / 6.0),
    });
    doc["field"] = {{"type", "analytic"},
                    {"generator", "four-gyre"},
                    {"amplitude", params.value("amplitude", 0.6)},
                    {"spacing", params.value("spacing", 2.0)}};
    doc["noise"] = detail::noise(params, 0.1, 0.03);
    doc["start"] = params.value("start", json::array({12, 170}));
    doc["goal"] = params.value("goal", json::array({188, 30}));
    return doc;
}

/// 100 x 100 m with a breakwater jutting from the west wall, so the only way north
/// passes east of it; uniform current heading `beta_deg`.
inline json ablation(const json& params = json::object()) {
    json doc;
    doc["name"] = "ablation";
    doc["bounds"] = {0, 0, 100, 100};
    doc["obstacles"] = json::array({detail::polygon({{0, 42}, {50, 42}, {50, 58}, {0, 58}})});
    doc["field"] = {{"type", "analytic"},
                    {"generator", "uniform"},
                    {"direction_deg", params.value("beta_deg", 270.0)},
                    {"magnitude", params.value("magnitude", 0.77)},
                    {"spacing", params.value("spacing", 5.0)}};
    doc["noise"] = detail::noise(params, 0.05, 0.02);
    doc["start"] = params.value("start", json::array({30, 10}));
    doc["goal"] = params.value("goal", json::array({30, 90}));
    return doc;
}

/// Two islands separated by a narrow strait on the direct line, with wide passages
/// around them; uniform cross current of `magnitude` heading `direction_deg`.
inline json strait(const json& params = json::object()) {
    const double gap = params.value("gap", 6.0);
    const double mid = 60.0;
    json doc;
    doc["name"] = "strait";
    doc["bounds"] = {0, 0, 140, 120};
    doc["obstacles"] = json::array({
        detail::polygon({{50, 22}, {90, 22}, {90, mid - 0.5 * gap}, {50, mid - 0.5 * gap}}),
        detail::polygon({{50, mid + 0.5 * gap}, {90, mid + 0.5 * gap}, {90, 98}, {50, 98}}),
    });
    doc["field"] = {{"type", "analytic"},
                    {"generator", "uniform"},
                    {"direction_deg", params.value("direction_deg", 90.0)},
                    {"magnitude", params.value("magnitude", 0.4)},
                    {"spacing", params.value("spacing", 5.0)}};
    doc["noise"] = detail::noise(params, 0.05, 0.02);
    doc["start"] = params.value("start", json::array({15, 60}));
    doc["goal"] = params.value("goal", json::array({125, 60}));
    return doc;
}

/// Obstacle-free square with a uniform current.
inline json empty(const json& params = json::object()) {
    json doc;
    doc["name"] = "empty";
    doc["bounds"] = {0, 0, 100, 100};
    doc["obstacles"] = json::array();
    doc["field"] = {{"type", "analytic"},
                    {"generator", "uniform"},
                    {"direction_deg", params.value("direction_deg", 0.0)},
                    {"magnitude", params.value("magnitude", 0.0)},
                    {"spacing", params.value("spacing", 5.0)}};
    doc["noise"] = detail::noise(params, 0.0, 0.0);
    doc["start"] = params.value("start", json::array({10, 50}));
    doc["goal"] = params.value("goal", json::array({90, 50}));
    return doc;
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"four-gyre", "ablation", "strait", "empty"};
    return names;
}

/// Packaged coastal stand-ins shipped as environment files under the data directory.
inline const std::vector<std::string>& packaged_names() {
    static const std::vector<std::string> names{"hansando", "far-east", "palawan-summer", "palawan-winter"};
    return names;
}

/// Environment document for a built-in scenario; throws on an unknown name.
inline json document(const std::string& name, const json& params = json::object()) {
    if (name == "four-gyre") return four_gyre(params);
    if (name == "ablation") return ablation(params);
    if (name == "strait") return strait(params);
    if (name == "empty") return empty(params);
    fail("unknown scenario '" + name + "'");
}

inline Environment generate(const std::string& name, const json& params = json::object()) {
    return environment_from_json(document(name, params));
}

inline std::filesystem::path packaged_path(const std::string& name, const std::filesystem::path& data_dir) {
    for (const auto& n : packaged_names())
        if (n == name) return data_dir / (name + ".json");
    fail("unknown packaged scenario '" + name + "'");
}

inline Environment load_packaged(const std::string& name, const std::filesystem::path& data_dir) {
    return load_environment(packaged_path(name, data_dir));
}

}  // namespace renew::scenarios
