#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "mcr/fixed.hpp"
#include "mcr/generate.hpp"
#include "mcr/io.hpp"
#include "mcr/oracle.hpp"
#include "mcr/svg.hpp"

using namespace mcr;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& key) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
        ++n;
        pos += key.size();
    }
    return n;
}

std::string temp_path(const char* name) {
    return std::string("/tmp/mcrkit_test_") + name;
}

}  // namespace

TEST_CASE("minimal fixed2d instance loads") {
    const char* doc = R"({
      "kind": "fixed2d",
      "polygon": [[[0,0],[2,0],[1,2]]],
      "center": [0.5, 0.5],
      "points": [[1, 0.5]]
    })";
    const auto inst = io::parse_instance(io::Json::parse(doc));
    CHECK(inst.kind == io::InstanceKind::Fixed2D);
    CHECK(inst.polygon.rings[0].size() == 3);
    CHECK(inst.points2.size() == 1);
}

TEST_CASE("schema errors carry diagnostics") {
    // Self-intersecting polygon.
    const char* bowtie = R"({
      "kind": "fixed2d",
      "polygon": [[[0,0],[2,2],[2,0],[0,2]]],
      "center": [0,0],
      "points": []
    })";
    CHECK_THROWS_MATCHES(io::parse_instance(io::Json::parse(bowtie)), SchemaError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("polygon")));

    // Missing field.
    const char* missing = R"({"kind": "fixed2d", "polygon": [[[0,0],[1,0],[0,1]]]})";
    CHECK_THROWS_AS(io::parse_instance(io::Json::parse(missing)), SchemaError);

    // Bad point arity.
    const char* arity = R"({
      "kind": "fixed2d",
      "polygon": [[[0,0],[1,0],[0,1]]],
      "center": [0, 0, 0],
      "points": []
    })";
    CHECK_THROWS_AS(io::parse_instance(io::Json::parse(arity)), SchemaError);

    // Mesh that is not closed.
    const char* open_mesh = R"({
      "kind": "fixed3d",
      "mesh": {"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
               "facets": [[0,2,1],[0,1,3],[1,2,3]]},
      "center": [0,0,0],
      "points": []
    })";
    CHECK_THROWS_AS(io::parse_instance(io::Json::parse(open_mesh)), SchemaError);

    // Unknown kind.
    CHECK_THROWS_AS(io::parse_instance(io::Json::parse(R"({"kind": "nope"})")),
                    SchemaError);
}

TEST_CASE("instance round trip is lossless") {
    Rng rng(1);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const auto inst = gen::star_instance(9, 7, seed);
        const auto j = io::instance_to_json(inst);
        const auto back = io::parse_instance(j);
        CHECK(io::instance_to_json(back).dump() == j.dump());
    }
    const auto inst3 = gen::box3d_instance(1, 5, 4);
    const auto j3 = io::instance_to_json(inst3);
    CHECK(io::instance_to_json(io::parse_instance(j3)).dump() == j3.dump());

    const auto scp = gen::scp_instance(4, 9);
    const auto js = io::instance_to_json(scp);
    CHECK(io::instance_to_json(io::parse_instance(js)).dump() == js.dump());
}

TEST_CASE("generators are deterministic per seed") {
    for (std::uint64_t seed : {7ULL, 8ULL}) {
        CHECK(io::instance_to_json(gen::star_instance(11, 9, seed)).dump() ==
              io::instance_to_json(gen::star_instance(11, 9, seed)).dump());
        CHECK(io::instance_to_json(gen::comb_instance(6, 2, seed)).dump() ==
              io::instance_to_json(gen::comb_instance(6, 2, seed)).dump());
        CHECK(io::instance_to_json(gen::scp_instance(5, seed)).dump() ==
              io::instance_to_json(gen::scp_instance(5, seed)).dump());
        CHECK(io::instance_to_json(gen::box3d_instance(2, 4, seed)).dump() ==
              io::instance_to_json(gen::box3d_instance(2, 4, seed)).dump());
    }
}

TEST_CASE("comb generator: simple polygon, k = 2 * teeth") {
    for (int teeth : {3, 5, 9}) {
        const auto inst = gen::comb_instance(teeth, 1, 1);
        CHECK_NOTHROW(validate_polygon(inst.polygon, 1e-12));
        const Config cfg = inst.config();
        const auto sres = solve_fixed_output_sensitive(inst.polygon, inst.center2,
                                                       inst.points2, cfg);
        CHECK(sres.event_count == 2 * teeth);
    }
}

TEST_CASE("events SVG depth profile steps") {
    AngularIntervalSet s1, s2;
    s1.intervals = {{0.5, 1.5, false}};
    s2.intervals = {{1.0, 2.5, false}};
    const std::string doc = svg::render_events_from_sets({s1, s2});

    // Re-parse the staircase: extract y coordinates from the depth profile.
    const std::string key = "class=\"depth-profile\"";
    const auto at = doc.find(key);
    REQUIRE(at != std::string::npos);
    const auto pts_at = doc.find("points=\"", at);
    REQUIRE(pts_at != std::string::npos);
    const auto end = doc.find('"', pts_at + 8);
    const std::string pts = doc.substr(pts_at + 8, end - pts_at - 8);

    std::vector<double> ys;
    std::size_t pos = 0;
    while (pos < pts.size()) {
        const auto comma = pts.find(',', pos);
        if (comma == std::string::npos) break;
        auto space = pts.find(' ', comma);
        if (space == std::string::npos) space = pts.size();
        ys.push_back(std::stod(pts.substr(comma + 1, space - comma - 1)));
        pos = space + 1;
    }
    REQUIRE_FALSE(ys.empty());
    // Convert to depth levels: y = base - unit * depth.
    std::vector<int> depths;
    const double base = *std::max_element(ys.begin(), ys.end());
    for (double y : ys) {
        const int d = static_cast<int>(std::lround((base - y) / 24.0));
        if (depths.empty() || depths.back() != d) depths.push_back(d);
    }
    CHECK(depths == std::vector<int>{0, 1, 2, 1, 0});
}

TEST_CASE("scene SVG draws exactly count points inside") {
    const auto inst = gen::star_instance(10, 12, 5);
    const Config cfg = inst.config();
    const auto sol =
        solve_fixed_baseline(inst.polygon, inst.center2, inst.points2, cfg);

    io::ResultFile res;
    res.solver = "fixed-baseline";
    res.instance_kind = "fixed2d";
    res.count = sol.best_count;
    res.witness["theta"] = sol.witness_angle;
    const std::string doc = svg::render_scene(inst, res);
    CHECK(count_occurrences(doc, "class=\"pt-in\"") ==
          static_cast<std::size_t>(sol.best_count));
    CHECK(count_occurrences(doc, "class=\"pt-in\"") +
              count_occurrences(doc, "class=\"pt-out\"") ==
          inst.points2.size());
}

TEST_CASE("curves SVG has one polyline per omega curve") {
    auto inst = gen::star_instance(8, 1, 13);
    inst.kind = io::InstanceKind::Segment2D;
    inst.segment = {{-0.8, 0.1}, {0.9, 0.4}};
    const Config cfg = inst.config();

    const auto frame =
        canonicalize_frame(inst.segment.u, inst.segment.v, cfg.eps_len);
    const auto axis_split =
        split_edges_at_x_axis(transform_polygon(inst.polygon, frame), cfg.eps_len);
    std::vector<Point2> pts{frame.to_canonical(inst.points2[0])};
    const auto curves = build_all_curves(axis_split, pts, frame.b_x, cfg);

    io::ResultFile res;
    res.witness["x"] = 0.1;
    res.witness["omega"] = 1.0;
    const std::string doc = svg::render_curves(inst, res);
    CHECK(count_occurrences(doc, "class=\"omega-curve\"") == curves.size());
    CHECK(count_occurrences(doc, "class=\"optimum\"") == 1);
}

TEST_CASE("render dispatch rejects incompatible modes") {
    const auto inst = gen::box3d_instance(1, 3, 2);
    io::ResultFile res;
    CHECK_THROWS_AS(svg::render(inst, res, "scene"), IncompatibleMode);
    CHECK_THROWS_AS(svg::render(inst, res, "nope"), IncompatibleMode);
}

TEST_CASE("result files round trip") {
    io::ResultFile res;
    res.solver = "fixed-baseline";
    res.instance_kind = "fixed2d";
    res.count = 3;
    res.witness["theta"] = 0.25;
    res.event_count = 12;
    res.wall_time_ms = 1.5;
    res.config_echo["eps_len"] = 1e-9;
    const auto path = temp_path("result.json");
    io::save_result(path, res);
    const auto back = io::load_result(path);
    CHECK(back.solver == res.solver);
    CHECK(back.count == res.count);
    CHECK(back.event_count.value() == 12);
    CHECK(back.witness["theta"].get<double>() == 0.25);
    std::remove(path.c_str());
}

TEST_CASE("full-precision number round trip through files") {
    auto inst = gen::star_instance(7, 5, 31);
    const auto path = temp_path("instance.json");
    io::save_instance(path, inst);
    const auto back = io::load_instance(path);
    REQUIRE(back.points2.size() == inst.points2.size());
    for (std::size_t i = 0; i < inst.points2.size(); ++i) {
        CHECK(back.points2[i].x == inst.points2[i].x);  // bit-exact
        CHECK(back.points2[i].y == inst.points2[i].y);
    }
    std::remove(path.c_str());
}
