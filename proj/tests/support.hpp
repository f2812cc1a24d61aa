#pragma once

// Shared fixtures and hand-rolled generators for the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "renew/renew.hpp"

namespace renew::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }
    Vec2 point(const Rect& r) { return {uniform(r.xmin, r.xmax), uniform(r.ymin, r.ymax)}; }
    std::mt19937_64& engine() { return rng_; }

    /// Star-shaped polygon around `c`: sorted random angles, radii in [0.5, 1] * r.
    Polygon star(Vec2 c, double r, int sides) {
        std::vector<double> ang;
        for (int i = 0; i < sides; ++i) ang.push_back(uniform(0.0, kTwoPi));
        std::sort(ang.begin(), ang.end());
        for (int i = 1; i < sides; ++i)
            if (ang[i] - ang[i - 1] < 0.2) ang[i] = ang[i - 1] + 0.2;
        double widest = kTwoPi - (ang.back() - ang.front());
        for (int i = 1; i < sides; ++i) widest = std::max(widest, ang[i] - ang[i - 1]);
        if (ang.back() - ang.front() > kTwoPi - 0.2 || widest > kPi - 0.1) return regular(c, r, sides, uniform(0.0, kTwoPi));
        Polygon p;
        for (const double a : ang) p.push_back(c + unit(a) * (r * uniform(0.5, 1.0)));
        return p;
    }

    static Polygon regular(Vec2 c, double r, int sides, double phase = 0.0) {
        Polygon p;
        for (int i = 0; i < sides; ++i) p.push_back(c + unit(phase + kTwoPi * i / sides) * r);
        return p;
    }

private:
    std::mt19937_64 rng_;
};

inline Polygon box(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

inline Environment make_env(Rect bounds, std::vector<Polygon> obstacles, CurrentField field = CurrentField::uniform({0, 0})) {
    Environment env;
    env.name = "test";
    env.bounds = bounds;
    env.obstacles = std::move(obstacles);
    env.field = std::move(field);
    validate_environment(env);
    return env;
}

/// Field sampled from an analytic generator on a lattice covering `bounds`.
inline CurrentField lattice(const Rect& bounds, double spacing, const fields::Generator& g, double sd = 0.0,
                            double sm = 0.0) {
    return fields::rasterize(bounds, spacing, g, sd, sm);
}

/// Up to `count` disjoint random obstacles in a 100 x 100 box (rejection on
/// circumscribed discs with a margin).
inline std::vector<Polygon> random_obstacles(Gen& g, int count, double margin = 2.0) {
    struct Disc {
        Vec2 c;
        double r;
    };
    std::vector<Disc> placed;
    std::vector<Polygon> out;
    for (int attempt = 0; attempt < 400 && static_cast<int>(out.size()) < count; ++attempt) {
        const double r = g.uniform(4.0, 14.0);
        const Vec2 c{g.uniform(r + 1.0, 99.0 - r), g.uniform(r + 1.0, 99.0 - r)};
        bool clash = false;
        for (const auto& d : placed) clash |= distance(d.c, c) < d.r + r + margin;
        if (clash) continue;
        placed.push_back({c, r});
        out.push_back(g.star(c, r, g.integer(3, 8)));
    }
    return out;
}

/// Constant-velocity source without a lattice: exercises the generic integrator path.
struct SmoothGyre {
    double amplitude{0.5};
    double length{40.0};
    [[nodiscard]] Vec2 sample(Vec2 p) const noexcept {
        const double sx = kPi * p.x / length, sy = kPi * p.y / length;
        return {-amplitude * std::sin(sx) * std::cos(sy), amplitude * std::cos(sx) * std::sin(sy)};
    }
};

struct ConstantSource {
    Vec2 v;
    [[nodiscard]] Vec2 sample(Vec2) const noexcept { return v; }
};

}  // namespace renew::testing
