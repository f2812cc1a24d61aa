#pragma once

// Robust orientation and in-circle tests. A floating-point filter with Shewchuk's
// static error bounds answers almost every query; uncertain cases are re-evaluated
// exactly with rational arithmetic (doubles convert to rationals without rounding).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

#include "renew/geometry.hpp"

namespace renew::predicates {

namespace detail {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr double kEpsilon = std::numeric_limits<double>::epsilon() * 0.5;
inline constexpr double kOrientBound = (3.0 + 16.0 * kEpsilon) * kEpsilon;
inline constexpr double kIncircleBound = (10.0 + 96.0 * kEpsilon) * kEpsilon;

inline int sign_of(const Rational& r) { return r.sign(); }

inline int orient_exact(Vec2 a, Vec2 b, Vec2 c) {
    const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    const Rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return sign_of(det);
}

inline int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Rational dx(d.x), dy(d.y);
    const Rational adx = Rational(a.x) - dx, ady = Rational(a.y) - dy;
    const Rational bdx = Rational(b.x) - dx, bdy = Rational(b.y) - dy;
    const Rational cdx = Rational(c.x) - dx, cdy = Rational(c.y) - dy;
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace detail

/// +1 if a, b, c turn counter-clockwise, -1 if clockwise, 0 if collinear. Exact.
[[nodiscard]] inline int orient(Vec2 a, Vec2 b, Vec2 c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    const double bound = detail::kOrientBound * detsum;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    if (detsum == 0.0) return 0;
    return detail::orient_exact(a, b, c);
}

/// +1 if d lies strictly inside the circumcircle of the counter-clockwise triangle
/// a, b, c; -1 if outside; 0 if cocircular. Exact.
[[nodiscard]] inline int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = detail::kIncircleBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    if (permanent == 0.0) return 0;
    return detail::incircle_exact(a, b, c, d);
}

/// True if p lies in the closed segment [a, b] (exact).
[[nodiscard]] inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
    if (orient(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

/// True if the open segments (a, b) and (c, d) cross at a single interior point.
[[nodiscard]] inline bool segments_cross_properly(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace renew::predicates
