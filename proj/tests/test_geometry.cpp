#include <gtest/gtest.h>

#include "support.hpp"

using namespace renew;
using renew::testing::Gen;

TEST(Geometry, SignedAreaOfUnitSquareIsOne) {
    const Polygon sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    EXPECT_DOUBLE_EQ(signed_area(sq), 1.0);
    const Polygon cw(sq.rbegin(), sq.rend());
    EXPECT_DOUBLE_EQ(signed_area(cw), -1.0);
}

TEST(Geometry, InradiusOfThreeFourFiveTriangle) {
    // r = (a + b - c) / 2 for a right triangle
    EXPECT_NEAR(triangle_inradius({0, 0}, {3, 0}, {0, 4}), 1.0, 1e-12);
}

TEST(Geometry, PointSegmentDistanceCases) {
    const Segment s{{0, 0}, {10, 0}};
    EXPECT_DOUBLE_EQ(point_segment_distance({5, 3}, s), 3.0);
    EXPECT_DOUBLE_EQ(point_segment_distance({-3, 4}, s), 5.0);
    EXPECT_DOUBLE_EQ(point_segment_distance({13, -4}, s), 5.0);
}

TEST(Geometry, SegmentDistanceZeroWhenCrossing) {
    EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}), 0.0);
    EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {1, 0}}, {{0, 2}, {1, 2}}), 2.0);
}

TEST(Geometry, ArclengthUsesOutgoingTangentAtVertices) {
    const Polyline p{{0, 0}, {10, 0}, {10, 10}};
    const auto at = point_at_arclength(p, 10.0);
    EXPECT_NEAR(at.position.x, 10.0, 1e-12);
    EXPECT_NEAR(at.tangent.y, 1.0, 1e-12);
    const auto mid = point_at_arclength(p, 15.0);
    EXPECT_NEAR(mid.position.y, 5.0, 1e-12);
    EXPECT_DOUBLE_EQ(polyline_length(p), 20.0);
}

TEST(Geometry, WrapAngleStaysInHalfOpenRange) {
    Gen g(11);
    for (int i = 0; i < 1000; ++i) {
        const double a = g.uniform(-50.0, 50.0);
        const double w = wrap_angle(a);
        EXPECT_GT(w, -kPi - 1e-12);
        EXPECT_LE(w, kPi + 1e-12);
        EXPECT_NEAR(std::remainder(a - w, kTwoPi), 0.0, 1e-9);
    }
}

TEST(GeometryProperty, PointInConvexPolygonMatchesHalfPlaneOracle) {
    Gen g(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Polygon poly = Gen::regular(g.point({20, 20, 80, 80}), g.uniform(2, 15), g.integer(3, 9), g.uniform(0, 6));
        for (int k = 0; k < 50; ++k) {
            const Vec2 p = g.point({0, 0, 100, 100});
            bool inside = true;
            double margin = 1e300;
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
                const double c = cross(b - a, p - a) / distance(a, b);
                inside &= c > 0.0;
                margin = std::min(margin, std::abs(c));
            }
            if (margin < 1e-9) continue;
            EXPECT_EQ(point_in_polygon(p, poly), inside);
        }
    }
}

TEST(GeometryProperty, InteriorPointIsInside) {
    Gen g(5);
    for (int trial = 0; trial < 300; ++trial) {
        const Polygon poly = g.star(g.point({20, 20, 80, 80}), g.uniform(2, 15), g.integer(3, 9));
        const Vec2 p = interior_point(poly);
        EXPECT_TRUE(point_in_polygon(p, poly));
    }
}
