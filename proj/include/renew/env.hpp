#pragma once

// World model: bounds, hard no-go polygons, the current field and the vehicle.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renew/error.hpp"
#include "renew/geometry.hpp"
#include "renew/predicates.hpp"

namespace renew {

/// Anything the integrator can query for a current velocity.
template <typename F>
concept CurrentSource = requires(const F& f, Vec2 p) {
    { f.sample(p) } -> std::convertible_to<Vec2>;
};

/// Spatially constant current.
struct UniformCurrent {
    Vec2 velocity{};

    [[nodiscard]] Vec2 sample(Vec2) const noexcept { return velocity; }
};

/// Current sampled on a regular lattice; node (i, j) sits at origin + spacing * (i, j).
class CurrentField {
public:
    CurrentField() : CurrentField(1, 1, {0, 0}, 1.0, {Vec2{}}) {}

    CurrentField(int nx, int ny, Vec2 origin, double spacing, std::vector<Vec2> data,
                 double noise_sigma_dir = 0.0, double noise_sigma_mag = 0.0)
        : nx_(nx), ny_(ny), origin_(origin), spacing_(spacing), data_(std::move(data)),
          noise_sigma_dir_(noise_sigma_dir), noise_sigma_mag_(noise_sigma_mag) {
        if (nx_ < 1 || ny_ < 1) fail("current field: grid dimensions must be positive");
        if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) fail("current field: spacing must be > 0");
        if (data_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_))
            fail("current field: expected " + std::to_string(nx_ * ny_) + " samples, got " +
                 std::to_string(data_.size()));
        for (std::size_t k = 0; k < data_.size(); ++k)
            if (!std::isfinite(data_[k].x) || !std::isfinite(data_[k].y))
                fail("current field: non-finite sample at cell (" + std::to_string(k % nx_) + ", " +
                     std::to_string(k / nx_) + ")");
        if (!(noise_sigma_dir_ >= 0.0) || !(noise_sigma_mag_ >= 0.0))
            fail("current field: noise sigmas must be >= 0");
        for (const auto& v : data_) max_magnitude_ = std::max(max_magnitude_, norm(v));
    }

    static CurrentField uniform(Vec2 v, double noise_sigma_dir = 0.0, double noise_sigma_mag = 0.0) {
        return CurrentField(1, 1, {0, 0}, 1.0, {v}, noise_sigma_dir, noise_sigma_mag);
    }

    [[nodiscard]] int nx() const noexcept { return nx_; }
    [[nodiscard]] int ny() const noexcept { return ny_; }
    [[nodiscard]] Vec2 origin() const noexcept { return origin_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    [[nodiscard]] double noise_sigma_dir() const noexcept { return noise_sigma_dir_; }
    [[nodiscard]] double noise_sigma_mag() const noexcept { return noise_sigma_mag_; }
    [[nodiscard]] double max_magnitude() const noexcept { return max_magnitude_; }
    [[nodiscard]] const std::vector<Vec2>& data() const noexcept { return data_; }

    [[nodiscard]] Vec2 node(int i, int j) const noexcept {
        return data_[static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i)];
    }
    [[nodiscard]] Vec2 node_position(int i, int j) const noexcept {
        return origin_ + Vec2{i * spacing_, j * spacing_};
    }

    /// Bilinear interpolation; queries outside the lattice clamp to its edge.
    [[nodiscard]] Vec2 sample(Vec2 p) const noexcept {
        const double gx = std::clamp((p.x - origin_.x) / spacing_, 0.0, static_cast<double>(nx_ - 1));
        const double gy = std::clamp((p.y - origin_.y) / spacing_, 0.0, static_cast<double>(ny_ - 1));
        const int i0 = std::min(static_cast<int>(gx), std::max(nx_ - 2, 0));
        const int j0 = std::min(static_cast<int>(gy), std::max(ny_ - 2, 0));
        const int i1 = std::min(i0 + 1, nx_ - 1);
        const int j1 = std::min(j0 + 1, ny_ - 1);
        const double tx = gx - i0;
        const double ty = gy - j0;
        const Vec2 a = node(i0, j0);
        const Vec2 b = node(i1, j0);
        const Vec2 c = node(i0, j1);
        const Vec2 d = node(i1, j1);
        return (a * (1.0 - tx) + b * tx) * (1.0 - ty) + (c * (1.0 - tx) + d * tx) * ty;
    }

private:
    int nx_;
    int ny_;
    Vec2 origin_;
    double spacing_;
    std::vector<Vec2> data_;
    double noise_sigma_dir_;
    double noise_sigma_mag_;
    double max_magnitude_{0.0};
};

/// Every lattice value rotated by `rotation` and stretched by `magnitude_delta`; one
/// realization of the field's noise model applied coherently over the domain.
template <CurrentSource F>
struct PerturbedCurrent {
    const F* base;
    double rotation{0.0};
    double magnitude_delta{0.0};

    [[nodiscard]] Vec2 sample(Vec2 p) const noexcept {
        const Vec2 v = base->sample(p);
        const double m = norm(v);
        if (m <= 0.0) return v;
        const double scale = std::max(0.0, m + magnitude_delta) / m;
        const double c = std::cos(rotation), s = std::sin(rotation);
        return Vec2{c * v.x - s * v.y, s * v.x + c * v.y} * scale;
    }
};

struct VehicleModel {
    double v_thrust{1.0};
    double omega_max{35.0 * kPi / 180.0};
    double length{2.0};

    /// Still-water turning radius.
    [[nodiscard]] double turn_radius() const noexcept { return v_thrust / omega_max; }
};

struct Environment {
    std::string name;
    Rect bounds;
    std::vector<Polygon> obstacles;
    CurrentField field;
    VehicleModel vehicle;
    std::optional<Vec2> start;
    std::optional<Vec2> goal;
};

struct CurrentStats {
    Vec2 mean;
    double std_dir{0.0};
    double std_mag{0.0};
    int sample_count{0};
};

[[nodiscard]] inline Vec2 sample_current(const CurrentField& field, Vec2 x) noexcept { return field.sample(x); }

namespace detail {

inline CurrentStats stats_from_samples(std::span<const Vec2> samples, const CurrentField& field) {
    CurrentStats st;
    st.sample_count = static_cast<int>(samples.size());
    Vec2 mean{};
    double mag_mean = 0.0;
    for (const auto& v : samples) {
        mean += v;
        mag_mean += norm(v);
    }
    const double n = static_cast<double>(samples.size());
    mean = mean / n;
    mag_mean /= n;
    const double mean_dir = std::atan2(mean.y, mean.x);
    double var_dir = 0.0;
    double var_mag = 0.0;
    for (const auto& v : samples) {
        const double m = norm(v);
        var_mag += (m - mag_mean) * (m - mag_mean);
        if (m > 0.0) {
            const double d = wrap_angle(std::atan2(v.y, v.x) - mean_dir);
            var_dir += d * d;
        }
    }
    var_dir /= n;
    var_mag /= n;
    st.mean = mean;
    st.std_dir = std::sqrt(var_dir + field.noise_sigma_dir() * field.noise_sigma_dir());
    st.std_mag = std::sqrt(var_mag + field.noise_sigma_mag() * field.noise_sigma_mag());
    return st;
}

inline Vec2 nearest_node_value(const CurrentField& field, Vec2 p) {
    const int i = std::clamp(static_cast<int>(std::lround((p.x - field.origin().x) / field.spacing())), 0,
                             field.nx() - 1);
    const int j = std::clamp(static_cast<int>(std::lround((p.y - field.origin().y) / field.spacing())), 0,
                             field.ny() - 1);
    return field.node(i, j);
}

}  // namespace detail

/// Mean current and spreads over the lattice nodes inside `region`, with the field's
/// configured noise added in quadrature. Regions that contain no node fall back to the
/// nearest node and the noise sigmas alone.
[[nodiscard]] inline CurrentStats local_current_stats(const CurrentField& field, std::span<const Vec2> region) {
    const Rect box = bounding_box(region);
    const double h = field.spacing();
    const Vec2 o = field.origin();
    const int i0 = std::max(0, static_cast<int>(std::ceil((box.xmin - o.x) / h)));
    const int i1 = std::min(field.nx() - 1, static_cast<int>(std::floor((box.xmax - o.x) / h)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((box.ymin - o.y) / h)));
    const int j1 = std::min(field.ny() - 1, static_cast<int>(std::floor((box.ymax - o.y) / h)));
    std::vector<Vec2> samples;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            if (point_in_polygon(field.node_position(i, j), region)) samples.push_back(field.node(i, j));
    if (samples.empty()) {
        CurrentStats st;
        st.mean = detail::nearest_node_value(field, polygon_centroid(region));
        st.std_dir = field.noise_sigma_dir();
        st.std_mag = field.noise_sigma_mag();
        return st;
    }
    return detail::stats_from_samples(samples, field);
}

/// Mean of the lattice nodes within `radius` of `center`; the interpolated value when
/// the disc holds no node.
[[nodiscard]] inline Vec2 mean_current_in_disc(const CurrentField& field, Vec2 center, double radius) {
    const double h = field.spacing();
    const Vec2 o = field.origin();
    const int i0 = std::max(0, static_cast<int>(std::ceil((center.x - radius - o.x) / h)));
    const int i1 = std::min(field.nx() - 1, static_cast<int>(std::floor((center.x + radius - o.x) / h)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((center.y - radius - o.y) / h)));
    const int j1 = std::min(field.ny() - 1, static_cast<int>(std::floor((center.y + radius - o.y) / h)));
    Vec2 sum{};
    int count = 0;
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i)
            if (distance(field.node_position(i, j), center) <= radius) {
                sum += field.node(i, j);
                ++count;
            }
    return count > 0 ? sum / static_cast<double>(count) : field.sample(center);
}

namespace detail {

inline bool polygon_is_simple(std::span<const Vec2> poly) {
    namespace pr = predicates;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 c = poly[j], d = poly[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // shared vertex is fine; folding back onto the previous edge is not
                const Vec2 shared = (j == i + 1) ? b : a;
                const Vec2 p = (j == i + 1) ? a : b;
                const Vec2 q = (j == i + 1) ? d : c;
                if (pr::orient(p, shared, q) == 0 && dot(p - shared, q - shared) > 0.0) return false;
                continue;
            }
            if (pr::segments_cross_properly(a, b, c, d)) return false;
            if (pr::on_segment(a, b, c) || pr::on_segment(a, b, d) || pr::on_segment(c, d, a) ||
                pr::on_segment(c, d, b))
                return false;
        }
    }
    return true;
}

inline bool polygons_overlap(std::span<const Vec2> p, std::span<const Vec2> q) {
    const std::size_t n = p.size(), m = q.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (predicates::segments_cross_properly(p[i], p[(i + 1) % n], q[j], q[(j + 1) % m])) return true;
    // Touching is allowed, so only strictly interior points count as overlap.
    auto strictly_inside = [](Vec2 v, std::span<const Vec2> poly) {
        return point_in_polygon(v, poly) && point_polygon_boundary_distance(v, poly) > 1e-9;
    };
    for (const auto& v : p)
        if (strictly_inside(v, q)) return true;
    for (const auto& v : q)
        if (strictly_inside(v, p)) return true;
    return strictly_inside(interior_point(p), q) || strictly_inside(interior_point(q), p);
}

}  // namespace detail

/// Checks every Environment invariant, normalizing obstacle orientation to CCW.
/// Throws Error(BadInput) naming the offending obstacle.
inline void validate_environment(Environment& env) {
    if (!(env.bounds.width() > 0.0) || !(env.bounds.height() > 0.0)) fail("bounds must have positive area");
    for (std::size_t k = 0; k < env.obstacles.size(); ++k) {
        auto& poly = env.obstacles[k];
        const std::string tag = "obstacle " + std::to_string(k) + ": ";
        if (poly.size() < 3) fail(tag + "degenerate polygon (fewer than 3 vertices)");
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (!std::isfinite(poly[i].x) || !std::isfinite(poly[i].y)) fail(tag + "non-finite vertex");
            if (distance(poly[i], poly[(i + 1) % poly.size()]) <= 1e-9)
                fail(tag + "degenerate polygon (duplicate vertex " + std::to_string(i) + ")");
            if (!env.bounds.contains(poly[i]))
                fail(tag + "vertex " + std::to_string(i) + " lies outside bounds");
        }
        if (std::abs(signed_area(poly)) <= 1e-12) fail(tag + "degenerate polygon (zero area)");
        if (!detail::polygon_is_simple(poly)) fail(tag + "simple polygon violated");
        if (signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    }
    for (std::size_t a = 0; a < env.obstacles.size(); ++a)
        for (std::size_t b = a + 1; b < env.obstacles.size(); ++b)
            if (detail::polygons_overlap(env.obstacles[a], env.obstacles[b]))
                fail("obstacles " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
    const auto& v = env.vehicle;
    if (!(v.v_thrust > 0.0)) fail("vehicle: v_thrust must be > 0");
    if (!(v.omega_max > 0.0)) fail("vehicle: omega_max must be > 0");
    if (!(v.length >= 0.0)) fail("vehicle: length must be >= 0");
    if (v.v_thrust <= env.field.max_magnitude())
        fail("underactuated assumption violated: v_thrust " + std::to_string(v.v_thrust) +
             " <= max current " + std::to_string(env.field.max_magnitude()));
}

}  // namespace renew
