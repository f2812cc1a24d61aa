#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace renew {

struct Vec2 {
    double x{0};
    double y{0};

    constexpr Vec2& operator+=(Vec2 o) noexcept { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) noexcept { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) noexcept { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {a.x * s, a.y * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {a.x * s, a.y * s}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) noexcept { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Polygon = std::vector<Vec2>;
using Polyline = std::vector<Vec2>;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[nodiscard]] constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
[[nodiscard]] constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
[[nodiscard]] inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
[[nodiscard]] inline double distance(Vec2 a, Vec2 b) noexcept { return norm(b - a); }
[[nodiscard]] inline Vec2 unit(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }
[[nodiscard]] inline Vec2 normalized(Vec2 a) noexcept {
    const double n = norm(a);
    return n > 0.0 ? a / n : Vec2{};
}
[[nodiscard]] constexpr Vec2 lerp(Vec2 a, Vec2 b, double t) noexcept { return a + (b - a) * t; }

/// Wraps an angle into (-pi, pi].
[[nodiscard]] inline double wrap_angle(double a) noexcept {
    a = std::fmod(a, kTwoPi);
    if (a <= -kPi) a += kTwoPi;
    else if (a > kPi) a -= kTwoPi;
    return a;
}

struct Segment {
    Vec2 a;
    Vec2 b;

    [[nodiscard]] double length() const noexcept { return distance(a, b); }
    [[nodiscard]] Vec2 midpoint() const noexcept { return (a + b) * 0.5; }
    [[nodiscard]] Vec2 at(double t) const noexcept { return lerp(a, b, t); }
};

struct Rect {
    double xmin{0};
    double ymin{0};
    double xmax{0};
    double ymax{0};

    [[nodiscard]] double width() const noexcept { return xmax - xmin; }
    [[nodiscard]] double height() const noexcept { return ymax - ymin; }
    [[nodiscard]] double area() const noexcept { return width() * height(); }
    [[nodiscard]] bool contains(Vec2 p) const noexcept {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    [[nodiscard]] Vec2 clamp(Vec2 p) const noexcept {
        return {std::clamp(p.x, xmin, xmax), std::clamp(p.y, ymin, ymax)};
    }
};

[[nodiscard]] inline Rect bounding_box(std::span<const Vec2> pts) noexcept {
    Rect r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : pts) {
        r.xmin = std::min(r.xmin, p.x);
        r.ymin = std::min(r.ymin, p.y);
        r.xmax = std::max(r.xmax, p.x);
        r.ymax = std::max(r.ymax, p.y);
    }
    return r;
}

/// Signed area, positive for counter-clockwise vertex order.
[[nodiscard]] inline double signed_area(std::span<const Vec2> poly) noexcept {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

[[nodiscard]] inline Vec2 polygon_centroid(std::span<const Vec2> poly) noexcept {
    const double a = signed_area(poly);
    const std::size_t n = poly.size();
    if (std::abs(a) < 1e-300) {
        Vec2 m{};
        for (const auto& p : poly) m += p;
        return n ? m / static_cast<double>(n) : m;
    }
    Vec2 c{};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % n];
        const double w = cross(p, q);
        c += (p + q) * w;
    }
    return c / (6.0 * a);
}

/// Even-odd point-in-polygon; points exactly on the boundary may go either way.
[[nodiscard]] inline bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) noexcept {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

/// Parameter of the closest point on `s` to `p`, clamped to [0, 1].
[[nodiscard]] inline double closest_param(Vec2 p, const Segment& s) noexcept {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 <= 0.0) return 0.0;
    return std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
}

[[nodiscard]] inline double point_segment_distance(Vec2 p, const Segment& s) noexcept {
    return distance(p, s.at(closest_param(p, s)));
}

/// True if the closed segments share at least one point (floating-point test).
[[nodiscard]] inline bool segments_intersect(const Segment& s, const Segment& t) noexcept {
    auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); };
    auto on_seg = [](Vec2 a, Vec2 b, Vec2 p) {
        return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
    };
    const double d1 = orient(t.a, t.b, s.a);
    const double d2 = orient(t.a, t.b, s.b);
    const double d3 = orient(s.a, s.b, t.a);
    const double d4 = orient(s.a, s.b, t.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_seg(t.a, t.b, s.a)) return true;
    if (d2 == 0 && on_seg(t.a, t.b, s.b)) return true;
    if (d3 == 0 && on_seg(s.a, s.b, t.a)) return true;
    if (d4 == 0 && on_seg(s.a, s.b, t.b)) return true;
    return false;
}

[[nodiscard]] inline double segment_segment_distance(const Segment& s, const Segment& t) noexcept {
    if (segments_intersect(s, t)) return 0.0;
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                     point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

/// Unsigned distance from `p` to the boundary of `poly`.
[[nodiscard]] inline double point_polygon_boundary_distance(Vec2 p, std::span<const Vec2> poly) noexcept {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) d = std::min(d, point_segment_distance(p, {poly[i], poly[(i + 1) % n]}));
    return d;
}

/// Distance from a segment to a polygon region (0 if it touches or enters it).
[[nodiscard]] inline double segment_polygon_distance(const Segment& s, std::span<const Vec2> poly) noexcept {
    if (point_in_polygon(s.a, poly) || point_in_polygon(s.b, poly)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_segment_distance(s, {poly[i], poly[(i + 1) % n]}));
    return d;
}

[[nodiscard]] inline double polyline_length(std::span<const Vec2> path) noexcept {
    double l = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) l += distance(path[i - 1], path[i]);
    return l;
}

/// Point and unit tangent at arc length `s` along a polyline. At a vertex the outgoing
/// segment's tangent is used.
struct PolylinePoint {
    Vec2 position;
    Vec2 tangent;
};

[[nodiscard]] inline PolylinePoint point_at_arclength(std::span<const Vec2> path, double s) noexcept {
    if (path.size() < 2) return {path.empty() ? Vec2{} : path.front(), {1.0, 0.0}};
    double acc = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const double l = distance(path[i - 1], path[i]);
        if (l <= 0.0) continue;
        if (s < acc + l || i + 1 == path.size()) {
            const double t = std::clamp((s - acc) / l, 0.0, 1.0);
            return {lerp(path[i - 1], path[i], t), (path[i] - path[i - 1]) / l};
        }
        acc += l;
    }
    return {path.back(), {1.0, 0.0}};
}

/// Inradius of a triangle.
[[nodiscard]] inline double triangle_inradius(Vec2 a, Vec2 b, Vec2 c) noexcept {
    const double area = 0.5 * std::abs(cross(b - a, c - a));
    const double per = distance(a, b) + distance(b, c) + distance(c, a);
    return per > 0.0 ? 2.0 * area / per : 0.0;
}

/// Point that lies strictly inside a simple polygon: the centroid when it is inside,
/// otherwise the middle of the widest interior span on a horizontal scanline.
[[nodiscard]] inline Vec2 interior_point(std::span<const Vec2> poly) {
    const Vec2 c = polygon_centroid(poly);
    if (point_in_polygon(c, poly) && point_polygon_boundary_distance(c, poly) > 1e-9) return c;
    const Rect box = bounding_box(poly);
    Vec2 best = c;
    double best_width = -1.0;
    for (int attempt = 1; attempt < 64; ++attempt) {
        // scan lines at irrational-ish fractions avoid passing exactly through vertices
        const double frac = std::fmod(0.5 + attempt * 0.6180339887498949, 1.0);
        const double y = box.ymin + frac * box.height();
        std::vector<double> xs;
        const std::size_t n = poly.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2 a = poly[i];
            const Vec2 b = poly[j];
            if ((a.y > y) != (b.y > y)) xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
            if (xs[i + 1] - xs[i] > best_width) {
                best_width = xs[i + 1] - xs[i];
                best = {0.5 * (xs[i] + xs[i + 1]), y};
            }
        }
        if (best_width > 0.0 && attempt >= 8) break;
    }
    return best;
}

}  // namespace renew
