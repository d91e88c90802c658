#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "mcr/mcr3d.hpp"
#include "mcr/oracle.hpp"
#include "mcr/util.hpp"

using namespace mcr;

namespace {

TriMeshPolyhedron box_mesh(Point3 lo, Point3 hi) {
    TriMeshPolyhedron m;
    m.vertices = {{lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z},
                  {lo.x, hi.y, lo.z}, {lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z},
                  {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z}};
    m.facets = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                {0, 1, 5}, {0, 5, 4}, {2, 3, 7}, {2, 7, 6},
                {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
    validate_mesh(m, 1e-9);
    return m;
}

TriMeshPolyhedron tetra_mesh(Point3 a, Point3 b, Point3 c, Point3 d) {
    TriMeshPolyhedron m;
    m.vertices = {a, b, c, d};
    m.facets = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {2, 0, 3}};
    validate_mesh(m, 1e-9);
    return m;
}

/// Algebraic least-squares circle fit; returns the max radial residual.
double circle_fit_residual(const std::vector<Point2>& pts) {
    // Solve [x y 1] [a b c]^T = x^2 + y^2 in least squares (Kasa fit).
    double sxx = 0, sxy = 0, sx1 = 0, syy = 0, sy1 = 0, s11 = 0;
    double rx = 0, ry = 0, r1 = 0;
    for (const auto& p : pts) {
        const double z = p.x * p.x + p.y * p.y;
        sxx += p.x * p.x; sxy += p.x * p.y; sx1 += p.x;
        syy += p.y * p.y; sy1 += p.y; s11 += 1.0;
        rx += p.x * z; ry += p.y * z; r1 += z;
    }
    const double A[3][3] = {{sxx, sxy, sx1}, {sxy, syy, sy1}, {sx1, sy1, s11}};
    const double B[3] = {rx, ry, r1};
    auto det3 = [](const double M[3][3]) {
        return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
    };
    const double D = det3(A);
    REQUIRE(std::abs(D) > 1e-30);
    double sol[3];
    for (int col = 0; col < 3; ++col) {
        double M[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) M[i][j] = (j == col) ? B[i] : A[i][j];
        sol[col] = det3(M) / D;
    }
    const Point2 center{sol[0] / 2.0, sol[1] / 2.0};
    const double radius = std::sqrt(sol[2] + norm2(center));
    double worst = 0.0;
    for (const auto& p : pts)
        worst = std::max(worst, std::abs(dist(p, center) - radius));
    return worst;
}

Point3 random_unit(Rng& rng) {
    while (true) {
        Point3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double n = norm(v);
        if (n > 0.1 && n <= 1.0) return (1.0 / n) * v;
    }
}

}  // namespace

TEST_CASE("rotation_from_direction") {
    auto r = rotation_from_direction(0.0, kPi / 2.0);
    CHECK(dist(r.apply({0, 0, 1}), {0, 0, 1}) <= 1e-15);
    CHECK(dist(r.apply({1, 0, 0}), {1, 0, 0}) <= 1e-15);

    r = rotation_from_direction(0.0, 0.0);
    CHECK(dist(r.apply({0, 0, 1}), {1, 0, 0}) <= 1e-15);

    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        const double theta = rng.uniform(0.0, kTwoPi);
        const double phi = rng.uniform(-kPi / 2, kPi / 2);
        const auto rot = rotation_from_direction(theta, phi);
        CHECK(dist(rot.apply({0, 0, 1}), direction_of(theta, phi)) <= 1e-12);
        // Orthonormal, det +1.
        const Point3 c0{rot.m[0][0], rot.m[1][0], rot.m[2][0]};
        const Point3 c1{rot.m[0][1], rot.m[1][1], rot.m[2][1]};
        const Point3 c2{rot.m[0][2], rot.m[1][2], rot.m[2][2]};
        CHECK(std::abs(norm(c0) - 1.0) <= 1e-12);
        CHECK(std::abs(dot(c0, c1)) <= 1e-12);
        CHECK(dist(cross(c0, c1), c2) <= 1e-12);
    }
}

TEST_CASE("sphere_facet_arcs clip cases") {
    Config cfg;
    cfg.eps_len = 1e-9;
    // Large triangle in z = 0 containing the whole equator.
    TriMeshPolyhedron m;
    m.vertices = {{-50, -50, 0}, {50, -50, 0}, {0, 80, 0}, {0, 0, -1}};
    m.facets = {{0, 1, 2}, {0, 2, 3}, {1, 0, 3}, {2, 1, 3}};
    auto arcs = sphere_facet_arcs(m, 0, {0, 0, 0}, 1.0, cfg);
    REQUIRE(arcs.size() == 1);
    CHECK(arcs[0].extent() == Catch::Approx(kTwoPi));
    CHECK(arcs[0].circle.radius == Catch::Approx(1.0));

    // Plane too far: no intersection.
    TriMeshPolyhedron far_m;
    far_m.vertices = {{-50, -50, 2}, {50, -50, 2}, {0, 80, 2}, {0, 0, 5}};
    far_m.facets = {{0, 1, 2}, {0, 2, 3}, {1, 0, 3}, {2, 1, 3}};
    CHECK(sphere_facet_arcs(far_m, 0, {0, 0, 0}, 1.0, cfg).empty());

    // Triangle covering the half-plane x >= 0 of z = 0: semicircle.
    TriMeshPolyhedron half;
    half.vertices = {{0, -90, 0}, {90, 0, 0}, {0, 90, 0}, {0, 0, -1}};
    half.facets = {{0, 1, 2}, {0, 2, 3}, {1, 0, 3}, {2, 1, 3}};
    arcs = sphere_facet_arcs(half, 0, {0, 0, 0}, 1.0, cfg);
    REQUIRE(arcs.size() == 1);
    CHECK(arcs[0].extent() == Catch::Approx(kPi).margin(1e-6));
}

TEST_CASE("sphere_facet_arcs endpoints lie on sphere, plane and triangle") {
    Rng rng(321);
    Config cfg;
    cfg.eps_len = 1e-9;
    int arcs_seen = 0;
    for (int iter = 0; iter < 60; ++iter) {
        const auto mesh = box_mesh({-1, -1, -1}, {1, 1, 1});
        const Point3 center{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                            rng.uniform(-0.5, 0.5)};
        const double radius = rng.uniform(0.3, 2.2);
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            const auto tri = mesh.facet_points(f);
            const auto pl = plane_through(tri[0], tri[1], tri[2]);
            for (const auto& arc : sphere_facet_arcs(mesh, f, center, radius, cfg)) {
                ++arcs_seen;
                for (double t : {0.0, 0.5, 1.0}) {
                    const Point3 q = arc_point(arc, t);
                    CHECK(std::abs(dist(q, center) - radius) <= 1e-8);
                    CHECK(std::abs(dot(pl.n, q) - pl.c) <= 1e-8);
                    CHECK(point_triangle_distance(q, tri[0], tri[1], tri[2]) <=
                          1e-7);
                }
            }
        }
    }
    CHECK(arcs_seen > 50);
}

TEST_CASE("inclusion_region degenerate and sampled membership") {
    Config cfg;
    cfg.eps_len = 1e-9;
    const auto cube = box_mesh({-1, -1, -1}, {1, 1, 1});
    auto reg = inclusion_region(cube, {0, 0, 0}, {0.1, 0, 0}, cfg);
    CHECK(reg.whole_sphere);
    reg = inclusion_region(cube, {0, 0, 0}, {10, 0, 0}, cfg);
    CHECK(reg.empty);

    // Orbit sphere penetrating the cube: membership agrees with direct
    // containment at Fibonacci-sampled directions.
    const Point3 p{1.2, 0, 0};
    reg = inclusion_region(cube, {0, 0, 0}, p, cfg);
    CHECK_FALSE(reg.whole_sphere);
    CHECK_FALSE(reg.empty);
    CHECK_FALSE(reg.boundary.empty());
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < 1000; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / 1000.0;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Point3 dir{rad * std::cos(golden * i), rad * std::sin(golden * i), z};
        const bool via_region = region_contains_direction(reg, cube, {0, 0, 0}, dir, cfg);
        const bool direct = point_in_polyhedron(cube, 1.2 * dir, cfg.eps_len) !=
                            Containment::Outside;
        CHECK(via_region == direct);
    }
}

TEST_CASE("normalization_rotation") {
    Rng rng(4711);
    const Point3 north{0, 0, 1};
    auto rot = normalization_rotation({0, 0, 2}, {0, 0, 0}, north, 1e-9);
    CHECK(dist(rot.apply({0, 0, 1}), north) <= 1e-12);  // identity case

    rot = normalization_rotation({0, 0, -2}, {0, 0, 0}, north, 1e-9);
    CHECK(dist(rot.apply({0, 0, -1}), north) <= 1e-12);  // antipodal case

    CHECK_THROWS_AS(normalization_rotation({0, 0, 0}, {0, 0, 0}, north, 1e-9),
                    PointAtCenter);

    for (int i = 0; i < 300; ++i) {
        const Point3 n = random_unit(rng);
        const Point3 p = 3.0 * random_unit(rng);
        const Point3 r{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dist(p, r) < 0.2) continue;
        const auto rr = normalization_rotation(p, r, n, 1e-9);
        CHECK(dist(rr.apply(normalized(p - r)), n) <= 1e-9);
        // Orthonormality.
        const Point3 c0{rr.m[0][0], rr.m[1][0], rr.m[2][0]};
        const Point3 c1{rr.m[0][1], rr.m[1][1], rr.m[2][1]};
        CHECK(std::abs(norm(c0) - 1.0) <= 1e-12);
        CHECK(std::abs(dot(c0, c1)) <= 1e-12);
    }
}

TEST_CASE("stereographic_project basics") {
    const Point3 north{0, 0, 1};
    const Point2 south = stereographic_project({0, 0, -1}, north, 1e-10);
    CHECK(norm(south) <= 1e-12);

    const Point2 eq = stereographic_project({1, 0, 0}, north, 1e-10);
    CHECK(eq.x == Catch::Approx(2.0));
    CHECK(eq.y == Catch::Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(stereographic_project({0, 0, 1}, north, 1e-10),
                    PoleProjection);
}

TEST_CASE("stereographic projection maps circles to circles") {
    Rng rng(161616);
    int tested = 0;
    for (int iter = 0; tested < 100 && iter < 1000; ++iter) {
        const Point3 pole = random_unit(rng);
        Point3 n = random_unit(rng);
        const double h = rng.uniform(-0.9, 0.9);
        const Circle3 circ{h * n, std::sqrt(1.0 - h * h), n};
        bool near_pole = false;
        for (int s = 0; s < 12; ++s) {
            const Point3 q = arc_point({circ, 0.0, kTwoPi}, s / 12.0);
            if (dot(q, pole) > 0.95) near_pole = true;
        }
        if (near_pole) continue;
        std::vector<Point2> projected;
        for (int s = 0; s < 12; ++s) {
            const Point3 q = arc_point({circ, 0.0, kTwoPi}, s / 12.0);
            projected.push_back(stereographic_project(normalized(q), pole, 1e-10));
        }
        CHECK(circle_fit_residual(projected) <= 1e-9);
        ++tested;
    }
    CHECK(tested == 100);
}

TEST_CASE("depth_at_rotation identity cases") {
    Config cfg;
    cfg.eps_len = 1e-9;
    const auto cube = box_mesh({-1, -1, -1}, {1, 1, 1});
    const std::vector<Point3> inside{{0.2, 0.1, -0.3}, {-0.5, 0.5, 0.5}};
    const std::vector<Point3> outside{{3, 0, 0}, {0, 4, 0}};
    Rotation3 ident;
    CHECK(depth_at_rotation(cube, {0, 0, 0}, inside, ident, cfg) == 2);
    CHECK(depth_at_rotation(cube, {0, 0, 0}, outside, ident, cfg) == 0);
}

TEST_CASE("latitude_theta_intervals membership matches containment") {
    Rng rng(2468);
    Config cfg;
    cfg.eps_len = 1e-9;
    const auto cube = box_mesh({-1, -1, -1}, {1, 1, 1});
    const Point3 r{0.1, -0.1, 0.2};

    // Point on the rotation axis: orbit is theta-invariant.
    {
        const std::vector<Point3> pts{{0.1, -0.1, 0.9}};
        auto sets = latitude_theta_intervals(cube, r, pts, kPi / 2.0, cfg);
        REQUIRE(sets.size() == 1);
        CHECK(sets[0].full_circle);
    }
    // Orbit strictly inside.
    {
        const std::vector<Point3> pts{{0.3, 0.0, 0.2}};
        auto sets = latitude_theta_intervals(cube, r, pts, 0.7, cfg);
        REQUIRE(sets.size() == 1);
        CHECK(sets[0].full_circle);
    }
    // Random instances.
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<Point3> pts;
        const int n = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(-1.8, 1.8), rng.uniform(-1.8, 1.8),
                           rng.uniform(-1.8, 1.8)});
        const double phi = rng.uniform(-kPi / 2, kPi / 2);
        const auto sets = latitude_theta_intervals(cube, r, pts, phi, cfg);
        for (int k = 0; k < 50; ++k) {
            const double theta = rng.uniform(0.0, kTwoPi);
            const auto rot = rotation_from_direction(theta, phi);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const bool direct =
                    point_in_polyhedron(cube, r + rot.apply(pts[i] - r),
                                        cfg.eps_len) != Containment::Outside;
                const bool via_set = sets[i].contains(theta, cfg.eps_ang);
                if (direct != via_set) {
                    // Only hairline disagreement at interval ends is allowed.
                    double d_min = kTwoPi;
                    for (const auto& iv : sets[i].intervals) {
                        d_min = std::min(d_min,
                                         std::abs(angle_diff(theta, iv.start)));
                        d_min = std::min(d_min,
                                         std::abs(angle_diff(theta, iv.end)));
                    }
                    CHECK(d_min < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("solve_3d_fixed_mcr: everything inside") {
    Config cfg;
    cfg.eps_len = 1e-9;
    const auto cube = box_mesh({-2, -2, -2}, {2, 2, 2});
    const std::vector<Point3> pts{{0.2, 0.1, 0.3}, {-0.4, 0.2, -0.1},
                                  {0.0, -0.5, 0.4}};
    const auto sol = solve_3d_fixed_mcr(cube, {0, 0, 0}, pts, cfg);
    CHECK(sol.count == 3);
    CHECK(depth_at_rotation(cube, {0, 0, 0}, pts,
                            rotation_from_direction(sol.theta_star, sol.phi_star),
                            cfg) == 3);
}

TEST_CASE("solve_3d_fixed_mcr dominates the sampling oracle") {
    Rng rng(888222);
    for (int iter = 0; iter < 6; ++iter) {
        const auto mesh =
            iter % 2 == 0
                ? box_mesh({-1, -1, -1}, {1, 1, 1})
                : tetra_mesh({-1.3, -1, -0.8}, {1.4, -0.9, -1.0}, {0, 1.5, -0.9},
                             {0.1, 0.2, 1.6});
        const Point3 r{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                       rng.uniform(-0.3, 0.3)};
        std::vector<Point3> pts;
        const int n = 2 + static_cast<int>(rng.below(5));
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(-1.6, 1.6), rng.uniform(-1.6, 1.6),
                           rng.uniform(-1.6, 1.6)});
        const Config cfg = make_config_3d(mesh, pts);
        const auto sol = solve_3d_fixed_mcr(mesh, r, pts, cfg);
        const auto rep = oracle::oracle_3d(mesh, r, pts, 20000, cfg);
        CHECK(sol.count >= rep.best_count);
        CHECK(depth_at_rotation(mesh, r, pts,
                                rotation_from_direction(sol.theta_star,
                                                        sol.phi_star),
                                cfg) == sol.count);
    }
}
