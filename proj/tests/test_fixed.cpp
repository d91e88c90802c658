#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mcr/fixed.hpp"
#include "mcr/oracle.hpp"
#include "mcr/util.hpp"

using namespace mcr;

namespace {

SimplePolygon square(double half) {
    return make_polygon(
        {{{-half, -half}, {half, -half}, {half, half}, {-half, half}}});
}

SimplePolygon star_polygon(Rng& rng, int n, Point2 center, double r_lo,
                           double r_hi) {
    std::vector<Point2> ring;
    std::vector<double> angles;
    for (int i = 0; i < n; ++i)
        angles.push_back(kTwoPi * (i + rng.uniform(0.05, 0.95)) / n);
    std::sort(angles.begin(), angles.end());
    for (double a : angles) {
        const double rad = rng.uniform(r_lo, r_hi);
        ring.push_back({center.x + rad * std::cos(a), center.y + rad * std::sin(a)});
    }
    return make_polygon({ring});
}

Config cfg_for(const SimplePolygon& poly, const std::vector<Point2>& extra) {
    return make_config_2d(poly, extra);
}

}  // namespace

TEST_CASE("point_rotation_intervals: orbit fully inside / outside") {
    const auto sq = square(2.0);
    const Config cfg = cfg_for(sq, {{0, 0}});
    auto set = point_rotation_intervals(sq, {0, 0}, {1, 0}, cfg);
    CHECK(set.full_circle);
    set = point_rotation_intervals(sq, {0, 0}, {5, 0}, cfg);
    CHECK(set.empty);
}

TEST_CASE("point_rotation_intervals: offset square gives [-pi/6, pi/6]") {
    const auto sq = make_polygon({{{1, -1}, {3, -1}, {3, 1}, {1, 1}}});
    const Config cfg = cfg_for(sq, {{0, 0}, {2, 0}});
    const auto set = point_rotation_intervals(sq, {0, 0}, {2, 0}, cfg);
    REQUIRE(set.intervals.size() == 1);
    const auto& iv = set.intervals[0];
    CHECK(iv.start == Catch::Approx(11 * kPi / 6).epsilon(1e-6));
    CHECK(iv.end == Catch::Approx(kPi / 6).epsilon(1e-6));

    // Dense angular sampling oracle.
    for (int i = 0; i < 4000; ++i) {
        const double theta = kTwoPi * i / 4000.0;
        const bool in_set = set.contains(theta, 1e-9);
        const bool truly =
            point_in_polygon(sq, rotate_about({2, 0}, {0, 0}, theta), cfg.eps_len) !=
            Containment::Outside;
        if (in_set != truly) {
            // Allow disagreement only within eps of the interval boundary.
            CHECK(std::min(std::abs(angle_diff(theta, iv.start)),
                           std::abs(angle_diff(theta, iv.end))) < 1e-3);
        }
    }
}

TEST_CASE("point at rotation center") {
    const auto sq = square(2.0);
    const Config cfg = cfg_for(sq, {{0, 0}});
    auto set = point_rotation_intervals(sq, {0, 0}, {0, 0}, cfg);
    CHECK(set.full_circle);
    const auto off = make_polygon({{{5, 5}, {6, 5}, {6, 6}, {5, 6}}});
    set = point_rotation_intervals(off, {0, 0}, {0, 0}, cfg);
    CHECK(set.empty);
}

TEST_CASE("sweep_max_coverage basic") {
    AngularIntervalSet s1, s2;
    s1.intervals = {{0.0, 1.0, false}};
    s2.intervals = {{0.5, 2.0, false}};
    auto sol = sweep_max_coverage({s1, s2});
    CHECK(sol.best_count == 2);
    REQUIRE_FALSE(sol.witness_intervals.empty());
    CHECK(sol.witness_intervals[0].start == Catch::Approx(0.5));
    CHECK(sol.witness_intervals[0].end == Catch::Approx(1.0));
}

TEST_CASE("sweep_max_coverage empty input") {
    auto sol = sweep_max_coverage({});
    CHECK(sol.best_count == 0);
    REQUIRE(sol.witness_intervals.size() == 1);
    CHECK(sol.witness_intervals[0].full_circle);
}

TEST_CASE("sweep_max_coverage wrap-around overlap") {
    AngularIntervalSet s1, s2;
    s1.intervals = {{5.0, 1.0, false}};  // wraps through 0
    s2.intervals = {{0.5, 2.0, false}};
    auto sol = sweep_max_coverage({s1, s2});
    CHECK(sol.best_count == 2);
    REQUIRE_FALSE(sol.witness_intervals.empty());
    CHECK(sol.witness_intervals[0].start == Catch::Approx(0.5));
    CHECK(sol.witness_intervals[0].end == Catch::Approx(1.0));
}

TEST_CASE("sweep counts degenerate touching maxima") {
    AngularIntervalSet s1, s2;
    s1.intervals = {{1.0, 2.0, false}};
    s2.intervals = {{2.0, 3.0, false}};
    auto sol = sweep_max_coverage({s1, s2});
    CHECK(sol.best_count == 2);  // both closed intervals contain 2.0
    REQUIRE_FALSE(sol.witness_intervals.empty());
    CHECK(sol.witness_intervals[0].degenerate(1e-12));
}

TEST_CASE("solve_fixed_baseline on the offset square") {
    const auto sq = make_polygon({{{1, -1}, {3, -1}, {3, 1}, {1, 1}}});
    const std::vector<Point2> pts{{2, 0}};
    const Config cfg = cfg_for(sq, pts);
    auto sol = solve_fixed_baseline(sq, {0, 0}, pts, cfg);
    CHECK(sol.best_count == 1);
    CHECK(oracle::count_at_rotation(sq, {0, 0}, pts, sol.witness_angle, cfg) == 1);
    REQUIRE(sol.witness_intervals.size() == 1);
    CHECK(sol.witness_intervals[0].contains(0.0, 1e-9));
    CHECK(sol.witness_intervals[0].contains(kPi / 6, 1e-6));
    CHECK_FALSE(sol.witness_intervals[0].contains(kPi, 1e-9));
}

TEST_CASE("normalize_polygon splits at perpendicular feet") {
    const auto sq = square(2.0);
    const Config cfg = cfg_for(sq, {{0, 0}});
    const auto norm = normalize_polygon(sq, {0, 0}, cfg);
    CHECK(norm.edge_list.size() == 8);

    // Edge whose foot is not interior stays whole.
    const auto tri = make_polygon({{{1, 1}, {3, 1}, {1, 3}}});
    const auto norm_tri = normalize_polygon(tri, {0, 0}, cfg);
    bool has_split_13 = false;
    for (const auto& ring : norm_tri.rings)
        for (const auto& v : ring)
            if (std::abs(v.x - 0.0) < 1e-12 && std::abs(v.y - 1.0) < 1e-12)
                has_split_13 = true;
    CHECK_FALSE(has_split_13);  // foot (0,1) of edge (1,1)-(3,1) lies outside it
}

TEST_CASE("events alternate and balance on random instances") {
    Rng rng(2024);
    for (int iter = 0; iter < 50; ++iter) {
        auto poly = star_polygon(rng, 6 + static_cast<int>(rng.below(10)),
                                 {rng.uniform(-1, 1), rng.uniform(-1, 1)}, 0.5, 2.5);
        const Point2 r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Config cfg = cfg_for(poly, {r, p});
        std::vector<RotationEvent> events;
        point_rotation_intervals(poly, r, p, cfg, 0, &events);
        if (events.empty()) continue;
        int in_count = 0, out_count = 0;
        for (const auto& e : events)
            (e.kind == RotationEvent::InEvent ? in_count : out_count)++;
        CHECK(in_count == out_count);
        // Sorted circularly, kinds must alternate.
        std::sort(events.begin(), events.end(),
                  [](const RotationEvent& a, const RotationEvent& b) {
                      return a.angle < b.angle;
                  });
        for (std::size_t i = 0; i + 1 < events.size(); ++i)
            CHECK(events[i].kind != events[i + 1].kind);
    }
}

TEST_CASE("interval membership matches direct containment") {
    Rng rng(555);
    int checked = 0;
    for (int iter = 0; iter < 30; ++iter) {
        auto poly = star_polygon(rng, 5 + static_cast<int>(rng.below(12)),
                                 {0, 0}, 0.5, 2.5);
        const Point2 r{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
        const Point2 p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Config cfg = cfg_for(poly, {r, p});
        const auto set = point_rotation_intervals(poly, r, p, cfg);
        for (int k = 0; k < 40; ++k) {
            const double theta = rng.uniform(0.0, kTwoPi);
            const bool in_set = set.contains(theta, cfg.eps_ang);
            const bool truly =
                point_in_polygon(poly, rotate_about(p, r, theta), cfg.eps_len) !=
                Containment::Outside;
            // Tolerate only hairline disagreement at interval boundaries.
            if (in_set != truly) {
                double d_min = kTwoPi;
                for (const auto& iv : set.intervals) {
                    d_min = std::min(d_min, std::abs(angle_diff(theta, iv.start)));
                    d_min = std::min(d_min, std::abs(angle_diff(theta, iv.end)));
                }
                CHECK(d_min < 1e-6);
            }
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("baseline == output-sensitive == oracle on random instances") {
    Rng rng(99887);
    for (int iter = 0; iter < 60; ++iter) {
        auto poly = star_polygon(rng, 4 + static_cast<int>(rng.below(17)),
                                 {0, 0}, 0.4, 2.5);
        const Point2 r{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        std::vector<Point2> pts;
        const int n = 1 + static_cast<int>(rng.below(20));
        for (int i = 0; i < n; ++i)
            pts.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        Config cfg = cfg_for(poly, pts);
        const auto base = solve_fixed_baseline(poly, r, pts, cfg);
        const auto sens = solve_fixed_output_sensitive(poly, r, pts, cfg);
        const auto orep = oracle::oracle_fixed(poly, r, pts, cfg);
        CHECK(base.best_count == sens.solution.best_count);
        CHECK(base.best_count == orep.best_count);
        CHECK(oracle::count_at_rotation(poly, r, pts, base.witness_angle, cfg) ==
              base.best_count);
        CHECK(oracle::count_at_rotation(poly, r, pts,
                                        sens.solution.witness_angle, cfg) ==
              sens.solution.best_count);
    }
}

TEST_CASE("normalized edges meet concentric circles at most once") {
    Rng rng(31337);
    for (int iter = 0; iter < 20; ++iter) {
        auto poly = star_polygon(rng, 5 + static_cast<int>(rng.below(10)),
                                 {0, 0}, 0.5, 2.5);
        const Point2 r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Config cfg = cfg_for(poly, {r});
        const auto norm = normalize_polygon(poly, r, cfg);
        for (int k = 0; k < 50; ++k) {
            const double rho = rng.uniform(0.01, 4.0);
            for (const auto& e : norm.edge_list) {
                auto hits = circle_segment_intersection({r, rho}, e, cfg.eps_len);
                // Two distinct transversal hits would violate normalization.
                if (hits.size() == 2)
                    CHECK(dist(hits[0].point, hits[1].point) <= 10 * cfg.eps_len);
            }
        }
    }
}

TEST_CASE("reduce_scp_to_mcr examples") {
    {
        auto red = reduce_scp_to_mcr({0.25}, {{0.2, 0.3}});
        const Config cfg = make_config_2d(red.polygon, red.points);
        auto sol = solve_fixed_baseline(red.polygon, red.center, red.points, cfg);
        CHECK(sol.best_count == 1);
    }
    {
        auto red = reduce_scp_to_mcr({0.0, 1.0}, {{-0.1, 0.1}, {0.9, 1.1}});
        const Config cfg = make_config_2d(red.polygon, red.points);
        auto sol = solve_fixed_baseline(red.polygon, red.center, red.points, cfg);
        CHECK(sol.best_count == 2);
    }
    {
        auto red = reduce_scp_to_mcr({0.0, 1.0}, {{0.4, 0.6}});
        const Config cfg = make_config_2d(red.polygon, red.points);
        auto sol = solve_fixed_baseline(red.polygon, red.center, red.points, cfg);
        CHECK(sol.best_count == 1);
    }
    CHECK_THROWS_AS(reduce_scp_to_mcr({0.0}, {{0.0, 0.5}, {0.4, 0.8}}),
                    InvalidScp);
}

TEST_CASE("scp reduction polygon is simple") {
    Rng rng(777);
    for (int iter = 0; iter < 10; ++iter) {
        std::vector<std::pair<double, double>> b;
        double cursor = 0.0;
        const int nb = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < nb; ++i) {
            cursor += rng.uniform(0.05, 0.4);
            const double w = rng.uniform(0.05, 0.5);
            b.push_back({cursor, cursor + w});
            cursor += w;
        }
        std::vector<double> a;
        const int na = 1 + static_cast<int>(rng.below(6));
        for (int i = 0; i < na; ++i) a.push_back(rng.uniform(0.0, cursor));
        auto red = reduce_scp_to_mcr(a, b);
        CHECK_NOTHROW(validate_polygon(red.polygon, 1e-12));
    }
}
