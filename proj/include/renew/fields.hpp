#pragma once

// Built-in analytic current generators, rasterized onto the lattice of a CurrentField.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "renew/env.hpp"

namespace renew::fields {

using Generator = std::function<Vec2(Vec2)>;

/// Uniform current heading `direction` radians (math convention, 0 = +x) at `magnitude`.
inline Generator uniform(double direction, double magnitude) {
    const Vec2 v = unit(direction) * magnitude;
    return [v](Vec2) { return v; };
}

/// Four counter-rotating cells on `bounds` from the stream function
/// psi = (U L / pi) sin(pi x' / Lx) sin(pi y' / Ly), with Lx, Ly half the domain size.
/// Peak speed is `amplitude`; gyre centres sit at the quarter points of the domain.
inline Generator four_gyre(const Rect& bounds, double amplitude) {
    const double lx = 0.5 * bounds.width();
    const double ly = 0.5 * bounds.height();
    return [=](Vec2 p) {
        const double sx = kPi * (p.x - bounds.xmin) / lx;
        const double sy = kPi * (p.y - bounds.ymin) / ly;
        return Vec2{-amplitude * std::sin(sx) * std::cos(sy), amplitude * std::cos(sx) * std::sin(sy)};
    };
}

/// One cell spanning `bounds`, stagnant at its centre.
inline Generator single_gyre(const Rect& bounds, double amplitude) {
    const double lx = bounds.width();
    const double ly = bounds.height();
    return [=](Vec2 p) {
        const double sx = kPi * (p.x - bounds.xmin) / lx;
        const double sy = kPi * (p.y - bounds.ymin) / ly;
        return Vec2{-amplitude * std::sin(sx) * std::cos(sy), amplitude * std::cos(sx) * std::sin(sy)};
    };
}

/// Straight jet through `anchor` flowing along `direction` with a Gaussian cross profile.
inline Generator jet(Vec2 anchor, double direction, double magnitude, double width) {
    const Vec2 d = unit(direction);
    return [=](Vec2 p) {
        const double off = cross(d, p - anchor);
        return d * (magnitude * std::exp(-(off * off) / (width * width)));
    };
}

inline CurrentField rasterize(const Rect& bounds, double spacing, const Generator& gen,
                              double noise_sigma_dir = 0.0, double noise_sigma_mag = 0.0) {
    if (!(spacing > 0.0)) fail("analytic field: spacing must be > 0");
    const int nx = static_cast<int>(std::ceil(bounds.width() / spacing - 1e-9)) + 1;
    const int ny = static_cast<int>(std::ceil(bounds.height() / spacing - 1e-9)) + 1;
    std::vector<Vec2> data;
    data.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) data.push_back(gen({bounds.xmin + i * spacing, bounds.ymin + j * spacing}));
    return CurrentField(nx, ny, {bounds.xmin, bounds.ymin}, spacing, std::move(data), noise_sigma_dir,
                        noise_sigma_mag);
}

/// Builds a generator from its JSON description, e.g.
/// {"generator": "uniform", "direction_deg": 45, "magnitude": 0.5}.
inline Generator from_json(const nlohmann::json& j, const Rect& bounds) {
    const std::string name = j.at("generator").get<std::string>();
    if (name == "uniform") {
        if (j.contains("vx")) {
            const Vec2 v{j.at("vx").get<double>(), j.at("vy").get<double>()};
            return [v](Vec2) { return v; };
        }
        return uniform(j.at("direction_deg").get<double>() * kPi / 180.0, j.at("magnitude").get<double>());
    }
    if (name == "four-gyre") return four_gyre(bounds, j.at("amplitude").get<double>());
    if (name == "single-gyre") return single_gyre(bounds, j.at("amplitude").get<double>());
    if (name == "jet") {
        const auto& a = j.at("anchor");
        return jet({a.at(0).get<double>(), a.at(1).get<double>()}, j.at("direction_deg").get<double>() * kPi / 180.0,
                   j.at("magnitude").get<double>(), j.at("width").get<double>());
    }
    if (name == "sum") {
        std::vector<Generator> parts;
        for (const auto& c : j.at("components")) parts.push_back(from_json(c, bounds));
        return [parts](Vec2 p) {
            Vec2 v{};
            for (const auto& g : parts) v += g(p);
            return v;
        };
    }
    fail("unknown analytic field generator '" + name + "'");
}

}  // namespace renew::fields
