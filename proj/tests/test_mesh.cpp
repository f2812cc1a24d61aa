#include <gtest/gtest.h>

#include "support.hpp"

using namespace renew;
using renew::testing::box;
using renew::testing::Gen;

namespace {

int vertex_id(const NavMesh& m, Vec2 p) {
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        if (distance(m.vertices[i], p) <= 1e-9) return static_cast<int>(i);
    return -1;
}

double free_area(const NavMesh& m) {
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
        if (m.is_free(t)) a += m.area(t);
    return a;
}

double hole_area(const NavMesh& m) {
    double a = 0.0;
    for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
        if (!m.is_free(t)) a += m.area(t);
    return a;
}

bool inside_any(Vec2 p, const std::vector<Polygon>& obs, double& margin) {
    bool in = false;
    margin = 1e300;
    for (const auto& poly : obs) {
        in |= point_in_polygon(p, poly);
        margin = std::min(margin, point_polygon_boundary_distance(p, poly));
    }
    return in;
}

}  // namespace

TEST(Mesh, EmptySquareHasTwoFreeTriangles) {
    const NavMesh m = build_navmesh(Rect{0, 0, 10, 10}, {});
    EXPECT_EQ(m.triangle_count(), 2u);
    EXPECT_EQ(m.free_count(), 2u);
}

TEST(Mesh, SquareHoleEulerCount) {
    const NavMesh m = build_navmesh(Rect{0, 0, 10, 10}, {box(4, 4, 6, 6)});
    const int n = 8, h = 1;
    EXPECT_EQ(static_cast<int>(m.free_count()), n + 2 * h - 2);
    EXPECT_EQ(m.triangle_count() - m.free_count(), 2u);
}

TEST(Mesh, EulerCountForSeveralConvexHoles) {
    Gen g(21);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Polygon> obs;
        const int h = g.integer(1, 5);
        int m_total = 0, hole_tris = 0;
        for (int k = 0; k < h; ++k) {
            const int sides = g.integer(3, 8);
            obs.push_back(Gen::regular({10.0 + 18.0 * k, g.uniform(20, 80)}, g.uniform(2, 7), sides, g.uniform(0, 1)));
            m_total += sides;
            hole_tris += sides - 2;
        }
        const NavMesh m = build_navmesh(Rect{0, 0, 100, 100}, obs);
        const int n = 4 + m_total;
        EXPECT_EQ(static_cast<int>(m.free_count()), n + 2 * h - 2) << trial;
        EXPECT_EQ(static_cast<int>(m.triangle_count() - m.free_count()), hole_tris) << trial;
    }
}

TEST(Mesh, ObstacleSegmentsAreConstrained) {
    const std::vector<Polygon> obs{box(10, 10, 30, 20), Gen::regular({60, 60}, 10, 5, 0.3)};
    const NavMesh m = build_navmesh(Rect{0, 0, 100, 100}, obs);
    for (const auto& poly : obs)
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const int a = vertex_id(m, poly[i]), b = vertex_id(m, poly[(i + 1) % poly.size()]);
            ASSERT_GE(a, 0);
            ASSERT_GE(b, 0);
            EXPECT_GE(m.constrained_edge_id(a, b), 0);
        }
}

TEST(Mesh, TwoTriangleDualHasOneEdge) {
    const DualGraph d = build_dual(build_navmesh(Rect{0, 0, 10, 10}, {}));
    EXPECT_EQ(d.node_count(), 2u);
    EXPECT_EQ(d.edge_count(), 1u);
}

TEST(Mesh, ConstrainedSharedEdgeBlocksAdjacency) {
    NavMesh m = build_navmesh(Rect{0, 0, 10, 10}, {});
    for (int t = 0; t < 2; ++t)
        for (int i = 0; i < 3; ++i)
            if (m.neighbors[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] >= 0)
                m.constrained[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = true;
    const DualGraph d = build_dual(m);
    EXPECT_EQ(d.node_count(), 2u);
    EXPECT_EQ(d.edge_count(), 0u);
}

TEST(Mesh, SingleTriangleDualHasNoEdges) {
    NavMesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    m.neighbors = {{-1, -1, -1}};
    m.constrained = {{true, true, true}};
    m.labels = {TriangleLabel::Free};
    m.hole_owner = {-1};
    const DualGraph d = build_dual(m);
    EXPECT_EQ(d.node_count(), 1u);
    EXPECT_EQ(d.edge_count(), 0u);
}

TEST(Mesh, LocateCentroidObstacleAndTie) {
    const NavMesh m = build_navmesh(Rect{0, 0, 10, 10}, {box(4, 4, 6, 6)});
    for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
        if (m.is_free(t)) EXPECT_EQ(locate_triangle(m, m.centroid(t)), t);
    EXPECT_FALSE(locate_triangle(m, {5, 5}).has_value());

    const NavMesh sq = build_navmesh(Rect{0, 0, 10, 10}, {});
    for (int i = 0; i < 3; ++i) {
        const int n = sq.neighbors[0][static_cast<std::size_t>(i)];
        if (n < 0) continue;
        const Vec2 mid = sq.edge(0, i).midpoint();
        EXPECT_EQ(locate_triangle(sq, mid), std::min(0, n));
    }
}

TEST(Mesh, WallAttachedObstacleSplitsBoundsEdge) {
    const Environment env = scenarios::generate("ablation");
    const NavMesh m = build_navmesh(env);
    EXPECT_NEAR(free_area(m) + std::abs(signed_area(env.obstacles[0])), env.bounds.area(), 1e-6 * env.bounds.area());
    EXPECT_NEAR(hole_area(m), std::abs(signed_area(env.obstacles[0])), 1e-9);
}

TEST(MeshProperty, AreasPartitionBoundsOnRandomEnvironments) {
    Gen g(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto obs = renew::testing::random_obstacles(g, g.integer(0, 8));
        const Environment env = renew::testing::make_env({0, 0, 100, 100}, obs);
        const NavMesh m = build_navmesh(env);
        double obstacle_area = 0.0;
        for (const auto& p : env.obstacles) obstacle_area += std::abs(signed_area(p));
        EXPECT_NEAR(free_area(m) + obstacle_area, env.bounds.area(), 1e-6 * env.bounds.area()) << trial;
        for (const auto& poly : env.obstacles)
            for (std::size_t i = 0; i < poly.size(); ++i)
                EXPECT_GE(m.constrained_edge_id(vertex_id(m, poly[i]), vertex_id(m, poly[(i + 1) % poly.size()])), 0);
        for (std::size_t t = 0; t < m.triangle_count(); ++t)
            for (int i = 0; i < 3; ++i) {
                const int n = m.neighbors[t][static_cast<std::size_t>(i)];
                if (n < 0) continue;
                const auto& nb = m.neighbors[static_cast<std::size_t>(n)];
                EXPECT_NE(std::find(nb.begin(), nb.end(), static_cast<int>(t)), nb.end());
            }
    }
}

TEST(MeshProperty, LocateAgreesWithPointInPolygonOracle) {
    Gen g(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto obs = renew::testing::random_obstacles(g, g.integer(1, 6));
        const Environment env = renew::testing::make_env({0, 0, 100, 100}, obs);
        const NavMesh m = build_navmesh(env);
        for (int k = 0; k < 300; ++k) {
            const Vec2 p = g.point(env.bounds);
            double margin;
            const bool blocked = inside_any(p, env.obstacles, margin);
            if (margin < 1e-7) continue;
            EXPECT_EQ(locate_triangle(m, p).has_value(), !blocked);
        }
    }
}

TEST(MeshProperty, DelaunayHoldsAcrossUnconstrainedEdges) {
    Gen g(51);
    for (int trial = 0; trial < 10; ++trial) {
        const Environment env = renew::testing::make_env({0, 0, 100, 100}, renew::testing::random_obstacles(g, 5));
        const NavMesh m = build_navmesh(env);
        for (int t = 0; t < static_cast<int>(m.triangle_count()); ++t)
            for (int i = 0; i < 3; ++i) {
                const int n = m.neighbors[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
                if (n < 0 || m.constrained[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
                const auto& nt = m.triangles[static_cast<std::size_t>(n)];
                const auto [a, b] = m.edge_vertices(t, i);
                for (const int v : nt)
                    if (v != a && v != b)
                        EXPECT_LE(predicates::incircle(m.corner(t, 0), m.corner(t, 1), m.corner(t, 2),
                                                       m.vertices[static_cast<std::size_t>(v)]),
                                  0);
            }
    }
}
