#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "mcr/errors.hpp"
#include "mcr/io.hpp"
#include "mcr/oracle.hpp"
#include "mcr/util.hpp"

namespace mcr::gen {

namespace detail {

inline io::Json provenance(const char* generator, std::uint64_t seed,
                           io::Json params) {
    io::Json p;
    p["generator"] = generator;
    p["seed"] = seed;
    p["params"] = std::move(params);
    return p;
}

}  // namespace detail

/// Comb-shaped polygon with `teeth` teeth over a base strip, rotation
/// center far below, and the points threaded through the teeth band so a
/// full turn crosses every tooth wall (2*teeth events per point).
inline io::Instance comb_instance(int teeth, int n_points, std::uint64_t seed) {
    if (teeth < 1) throw InvalidParams("comb: teeth must be >= 1");
    if (n_points < 1) throw InvalidParams("comb: points must be >= 1");
    const double W = 2.0 * teeth - 1.0;
    std::vector<Point2> ring{{0.0, 0.0}, {W, 0.0}, {W, 2.0}};
    for (int i = teeth - 1; i >= 1; --i) {
        ring.push_back({2.0 * i, 2.0});
        ring.push_back({2.0 * i, 1.0});
        ring.push_back({2.0 * i - 1.0, 1.0});
        ring.push_back({2.0 * i - 1.0, 2.0});
    }
    ring.push_back({0.0, 2.0});

    const double depth = std::max(4.0, 0.5 * W * W);
    io::Instance inst;
    inst.kind = io::InstanceKind::Fixed2D;
    inst.polygon = make_polygon({ring});
    inst.center2 = {0.5 * W, -depth};
    for (int i = 0; i < n_points; ++i)
        inst.points2.push_back({0.5 * W, 1.2 + 0.6 * (i + 0.5) / n_points});
    io::Json params;
    params["teeth"] = teeth;
    params["points"] = n_points;
    inst.provenance = detail::provenance("comb", seed, params);
    return inst;
}

/// Random star-shaped polygon about the origin (simple by construction:
/// strictly increasing vertex angles) with points scattered around it.
inline io::Instance star_instance(int vertices, int n_points,
                                  std::uint64_t seed) {
    if (vertices < 3) throw InvalidParams("star: needs >= 3 vertices");
    if (n_points < 0) throw InvalidParams("star: negative point count");
    Rng rng(seed);
    std::vector<double> angles;
    for (int i = 0; i < vertices; ++i)
        angles.push_back(kTwoPi * (i + rng.uniform(0.05, 0.95)) / vertices);
    std::sort(angles.begin(), angles.end());
    std::vector<Point2> ring;
    for (double a : angles) {
        const double rad = rng.uniform(1.0, 2.5);
        ring.push_back({rad * std::cos(a), rad * std::sin(a)});
    }
    io::Instance inst;
    inst.kind = io::InstanceKind::Fixed2D;
    inst.polygon = make_polygon({ring});
    inst.center2 = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    for (int i = 0; i < n_points; ++i)
        inst.points2.push_back({rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)});
    io::Json params;
    params["vertices"] = vertices;
    params["points"] = n_points;
    inst.provenance = detail::provenance("star", seed, params);
    return inst;
}

/// Axis-aligned box polygon of half-extent bbox with points scattered in
/// twice that range.
inline io::Instance random_points_instance(int n_points, double bbox,
                                           std::uint64_t seed) {
    if (n_points < 1) throw InvalidParams("random-points: count must be >= 1");
    if (!(bbox > 0.0)) throw InvalidParams("random-points: bbox must be > 0");
    Rng rng(seed);
    io::Instance inst;
    inst.kind = io::InstanceKind::Fixed2D;
    inst.polygon = make_polygon(
        {{{-bbox, -bbox}, {bbox, -bbox}, {bbox, bbox}, {-bbox, bbox}}});
    inst.center2 = {0.0, 0.0};
    for (int i = 0; i < n_points; ++i)
        inst.points2.push_back({rng.uniform(-2.0 * bbox, 2.0 * bbox),
                                rng.uniform(-2.0 * bbox, 2.0 * bbox)});
    io::Json params;
    params["count"] = n_points;
    params["bbox"] = bbox;
    inst.provenance = detail::provenance("random-points", seed, params);
    return inst;
}

/// Random Segments Containing Points instance with a planted answer: even
/// attempts plant a yes-instance by sampling A inside B - u; odd attempts
/// sample A freely and report the brute-force answer in the provenance.
inline io::Instance scp_instance(int size, std::uint64_t seed) {
    if (size < 1) throw InvalidParams("scp: size must be >= 1");
    Rng rng(seed);
    io::Instance inst;
    inst.kind = io::InstanceKind::Scp;

    const int nb = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    double cursor = 0.0;
    for (int i = 0; i < nb; ++i) {
        cursor += rng.uniform(0.05, 0.4);
        const double w = rng.uniform(0.05, 0.5);
        inst.scp.b.push_back({cursor, cursor + w});
        cursor += w;
    }
    const int na = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    const bool plant_yes = rng.next_u64() % 2 == 0;
    if (plant_yes) {
        const double u = rng.uniform(-0.3, 0.3);
        for (int i = 0; i < na; ++i) {
            const auto& iv = inst.scp.b[rng.below(inst.scp.b.size())];
            inst.scp.a.push_back(rng.uniform(iv.first, iv.second) - u);
        }
    } else {
        for (int attempt = 0; attempt < 64; ++attempt) {
            inst.scp.a.clear();
            for (int i = 0; i < na; ++i)
                inst.scp.a.push_back(rng.uniform(-0.2, cursor + 0.2));
            if (!oracle::scp_has_shift(inst.scp.a, inst.scp.b)) break;
        }
    }
    io::Json params;
    params["size"] = size;
    params["planted"] = plant_yes ? "yes" : "no";
    params["answer"] = oracle::scp_has_shift(inst.scp.a, inst.scp.b);
    inst.provenance = detail::provenance("scp", seed, params);
    return inst;
}

/// Box mesh with each face subdivided subdiv x subdiv (12 * subdiv^2
/// facets), random per-axis extents, and points scattered around it.
inline io::Instance box3d_instance(int subdiv, int n_points,
                                   std::uint64_t seed) {
    if (subdiv < 1) throw InvalidParams("box3d: subdiv must be >= 1");
    if (n_points < 1) throw InvalidParams("box3d: points must be >= 1");
    Rng rng(seed);
    const double hx = rng.uniform(0.7, 1.4);
    const double hy = rng.uniform(0.7, 1.4);
    const double hz = rng.uniform(0.7, 1.4);

    io::Instance inst;
    inst.kind = io::InstanceKind::Fixed3D;
    TriMeshPolyhedron& mesh = inst.mesh;
    std::map<std::tuple<double, double, double>, int> index;
    auto vid = [&](double x, double y, double z) {
        auto key = std::make_tuple(x, y, z);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back({x, y, z});
        index[key] = id;
        return id;
    };
    // Each face: grid corners via exact lerp so shared edges dedupe.
    const int s = subdiv;
    auto lerp = [&](double lo, double hi, int i) {
        return lo + (hi - lo) * static_cast<double>(i) / s;
    };
    auto emit_face = [&](int axis, bool positive) {
        for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j) {
                double q[4][3];
                const int ii[4] = {i, i + 1, i + 1, i};
                const int jj[4] = {j, j, j + 1, j + 1};
                for (int c = 0; c < 4; ++c) {
                    double uu = 0.0, vv = 0.0;
                    if (axis == 0) {
                        uu = lerp(-hy, hy, ii[c]);
                        vv = lerp(-hz, hz, jj[c]);
                        q[c][0] = positive ? hx : -hx;
                        q[c][1] = uu;
                        q[c][2] = vv;
                    } else if (axis == 1) {
                        uu = lerp(-hx, hx, ii[c]);
                        vv = lerp(-hz, hz, jj[c]);
                        q[c][0] = uu;
                        q[c][1] = positive ? hy : -hy;
                        q[c][2] = vv;
                    } else {
                        uu = lerp(-hx, hx, ii[c]);
                        vv = lerp(-hy, hy, jj[c]);
                        q[c][0] = uu;
                        q[c][1] = vv;
                        q[c][2] = positive ? hz : -hz;
                    }
                }
                int v0 = vid(q[0][0], q[0][1], q[0][2]);
                int v1 = vid(q[1][0], q[1][1], q[1][2]);
                int v2 = vid(q[2][0], q[2][1], q[2][2]);
                int v3 = vid(q[3][0], q[3][1], q[3][2]);
                // Outward winding depends on the face side.
                const bool flip =
                    (axis == 0 && !positive) || (axis == 1 && positive) ||
                    (axis == 2 && !positive);
                if (!flip) {
                    mesh.facets.push_back({v0, v1, v2});
                    mesh.facets.push_back({v0, v2, v3});
                } else {
                    mesh.facets.push_back({v0, v2, v1});
                    mesh.facets.push_back({v0, v3, v2});
                }
            }
        }
    };
    for (int axis = 0; axis < 3; ++axis) {
        emit_face(axis, true);
        emit_face(axis, false);
    }
    validate_mesh(mesh, 1e-12, /*check_self_intersection=*/subdiv <= 2);

    inst.center3 = {rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                    rng.uniform(-0.3, 0.3)};
    for (int i = 0; i < n_points; ++i)
        inst.points3.push_back({rng.uniform(-1.6, 1.6), rng.uniform(-1.6, 1.6),
                                rng.uniform(-1.6, 1.6)});
    io::Json params;
    params["subdiv"] = subdiv;
    params["points"] = n_points;
    inst.provenance = detail::provenance("box3d", seed, params);
    return inst;
}

}  // namespace mcr::gen
