#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mcr/fixed.hpp"
#include "mcr/generate.hpp"
#include "mcr/oracle.hpp"
#include "mcr/util.hpp"

using namespace mcr;

namespace {

io::Instance random_star(Rng& rng, int max_m, int max_n) {
    return gen::star_instance(3 + static_cast<int>(rng.below(max_m - 2)),
                              1 + static_cast<int>(rng.below(max_n)),
                              rng.next_u64());
}

}  // namespace

TEST_CASE("count_at_rotation basics") {
    const auto sq = make_polygon({{{1, -1}, {3, -1}, {3, 1}, {1, 1}}});
    const std::vector<Point2> pts{{2, 0}};
    const Config cfg = make_config_2d(sq, pts);
    CHECK(oracle::count_at_rotation(sq, {0, 0}, pts, kPi / 12.0, cfg) == 1);
    CHECK(oracle::count_at_rotation(sq, {0, 0}, pts, kPi / 2.0, cfg) == 0);
    CHECK(oracle::count_at_rotation(sq, {2, 0}, pts, 0.0, cfg) == 1);
}

TEST_CASE("oracle_fixed is exact: extra probes never improve it") {
    Rng rng(17);
    for (int iter = 0; iter < 20; ++iter) {
        const auto inst = random_star(rng, 12, 10);
        const Config cfg = inst.config();
        const auto rep =
            oracle::oracle_fixed(inst.polygon, inst.center2, inst.points2, cfg);
        CHECK(oracle::count_at_rotation(inst.polygon, inst.center2, inst.points2,
                                        rep.witness_theta, cfg) == rep.best_count);
        for (int probe = 0; probe < 1000; ++probe) {
            const double theta = rng.uniform(0.0, kTwoPi);
            CHECK(oracle::count_at_rotation(inst.polygon, inst.center2,
                                            inst.points2, theta,
                                            cfg) <= rep.best_count);
        }
    }
}

TEST_CASE("oracle_segment grid G=1 equals the fixed oracle at a") {
    Rng rng(23);
    for (int iter = 0; iter < 10; ++iter) {
        const auto inst = random_star(rng, 10, 8);
        const Point2 a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point2 b = a + Point2{1.0, 0.5};
        const Config cfg = inst.config();
        const auto seg_rep =
            oracle::oracle_segment(inst.polygon, inst.points2, a, b, 1, cfg);
        const auto fix_rep = oracle::oracle_fixed(inst.polygon, a, inst.points2, cfg);
        CHECK(seg_rep.best_count == fix_rep.best_count);
        CHECK(dist(seg_rep.witness_center, a) <= 1e-12);
    }
}

TEST_CASE("oracle_segment is monotone under grid refinement") {
    Rng rng(29);
    for (int iter = 0; iter < 8; ++iter) {
        const auto inst = random_star(rng, 10, 8);
        const Point2 a{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point2 b{rng.uniform(-1, 1) + 1.2, rng.uniform(-1, 1)};
        const Config cfg = inst.config();
        int prev = -1;
        for (int g : {8, 16, 32, 64}) {
            const auto rep =
                oracle::oracle_segment(inst.polygon, inst.points2, a, b, g, cfg);
            CHECK(rep.best_count >= prev);
            prev = rep.best_count;
            CHECK(oracle::count_at_rotation(inst.polygon, rep.witness_center,
                                            inst.points2, rep.witness_theta,
                                            cfg) == rep.best_count);
        }
    }
}

TEST_CASE("oracle_segment inner evaluation equals oracle_fixed per center") {
    // The grid oracle uses a faster per-center path; it must agree exactly
    // with the full candidate enumeration.
    Rng rng(31);
    for (int iter = 0; iter < 30; ++iter) {
        const auto inst = random_star(rng, 12, 10);
        const Point2 c{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        const Config cfg = inst.config();
        const auto grid_rep =
            oracle::oracle_segment(inst.polygon, inst.points2, c, c + Point2{1, 0},
                                   1, cfg);
        const auto fix_rep =
            oracle::oracle_fixed(inst.polygon, c, inst.points2, cfg);
        CHECK(grid_rep.best_count == fix_rep.best_count);
    }
}

TEST_CASE("oracle_3d nested sample counts are nondecreasing") {
    Rng rng(37);
    const auto inst = gen::box3d_instance(1, 6, 99);
    const Config cfg = inst.config();
    int prev = -1;
    for (long s : {100L, 1000L, 10000L}) {
        const auto rep =
            oracle::oracle_3d(inst.mesh, inst.center3, inst.points3, s, cfg);
        CHECK(rep.best_count >= prev);
        prev = rep.best_count;
    }
}

TEST_CASE("oracle_3d all-inside instance") {
    TriMeshPolyhedron big;
    big.vertices = {{-9, -9, -9}, {9, -9, -9}, {9, 9, -9}, {-9, 9, -9},
                    {-9, -9, 9}, {9, -9, 9}, {9, 9, 9}, {-9, 9, 9}};
    big.facets = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7},
                  {0, 1, 5}, {0, 5, 4}, {2, 3, 7}, {2, 7, 6},
                  {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
    validate_mesh(big, 1e-9);
    const std::vector<Point3> pts{{0.3, 0.1, 0.2}, {-0.4, 0.5, -0.2}};
    const Config cfg = make_config_3d(big, pts);
    const auto rep = oracle::oracle_3d(big, {0, 0, 0}, pts, 50, cfg);
    CHECK(rep.best_count == 2);
}

TEST_CASE("scp_has_shift") {
    CHECK(oracle::scp_has_shift({0.25}, {{0.2, 0.3}}));
    CHECK(oracle::scp_has_shift({0.0, 1.0}, {{-0.1, 0.1}, {0.9, 1.1}}));
    CHECK_FALSE(oracle::scp_has_shift({0.0, 1.0}, {{0.4, 0.6}}));
    // Exact endpoint touching counts (closed intervals).
    CHECK(oracle::scp_has_shift({0.0, 0.2}, {{1.0, 1.2}}));
    CHECK(oracle::scp_has_shift({0.0, 0.5}, {{2.0, 2.1}, {2.4, 2.6}}));
}

TEST_CASE("scp reduction agrees with the 1D brute force") {
    Rng rng(43);
    int yes_seen = 0, no_seen = 0;
    for (int iter = 0; iter < 40; ++iter) {
        const auto inst = gen::scp_instance(5, rng.next_u64());
        const bool expect = oracle::scp_has_shift(inst.scp.a, inst.scp.b);
        const auto red = reduce_scp_to_mcr(inst.scp.a, inst.scp.b);
        const Config cfg = make_config_2d(red.polygon, red.points);
        const auto sol =
            solve_fixed_baseline(red.polygon, red.center, red.points, cfg);
        const bool got = sol.best_count == static_cast<int>(inst.scp.a.size());
        CHECK(got == expect);
        (expect ? yes_seen : no_seen)++;
    }
    CHECK(yes_seen > 5);
    CHECK(no_seen > 5);
}
