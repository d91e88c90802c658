#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcr/errors.hpp"
#include "mcr/fixed.hpp"
#include "mcr/geom.hpp"
#include "mcr/geom3.hpp"

namespace mcr::io {

using Json = nlohmann::ordered_json;

enum class InstanceKind { Fixed2D, Segment2D, Chain2D, Fixed3D, Scp };

inline const char* kind_name(InstanceKind k) {
    switch (k) {
        case InstanceKind::Fixed2D: return "fixed2d";
        case InstanceKind::Segment2D: return "segment2d";
        case InstanceKind::Chain2D: return "chain2d";
        case InstanceKind::Fixed3D: return "fixed3d";
        case InstanceKind::Scp: return "scp";
    }
    return "?";
}

struct Instance {
    InstanceKind kind = InstanceKind::Fixed2D;
    SimplePolygon polygon;       // 2d kinds
    Point2 center2{0.0, 0.0};    // fixed2d
    std::vector<Point2> points2;
    Segment2 segment{{0, 0}, {1, 0}};  // segment2d
    std::vector<Point2> chain;         // chain2d vertices
    TriMeshPolyhedron mesh;            // fixed3d
    Point3 center3{0.0, 0.0, 0.0};
    std::vector<Point3> points3;
    ScpInstance scp;                   // scp
    std::optional<double> eps_len_override;
    std::optional<double> eps_ang_override;
    Json provenance;  // optional generator/seed echo

    Config config() const {
        Config cfg;
        switch (kind) {
            case InstanceKind::Fixed2D:
                cfg = make_config_2d(polygon, points2);
                break;
            case InstanceKind::Segment2D: {
                auto extra = points2;
                extra.push_back(segment.u);
                extra.push_back(segment.v);
                cfg = make_config_2d(polygon, extra);
                break;
            }
            case InstanceKind::Chain2D: {
                auto extra = points2;
                extra.insert(extra.end(), chain.begin(), chain.end());
                cfg = make_config_2d(polygon, extra);
                break;
            }
            case InstanceKind::Fixed3D:
                cfg = make_config_3d(mesh, points3);
                break;
            case InstanceKind::Scp:
                cfg = Config::for_diameter(1.0);
                break;
        }
        if (eps_len_override) cfg.eps_len = *eps_len_override;
        if (eps_ang_override) cfg.eps_ang = *eps_ang_override;
        return cfg;
    }
};

namespace detail {

inline double number_at(const Json& j, const std::string& where) {
    if (!j.is_number())
        throw SchemaError("expected a number at " + where);
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw SchemaError("non-finite number at " + where);
    return v;
}

inline Point2 point2_at(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw SchemaError("expected [x, y] at " + where);
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline Point3 point3_at(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw SchemaError("expected [x, y, z] at " + where);
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]"),
            number_at(j[2], where + "[2]")};
}

inline std::vector<Point2> points2_at(const Json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError("expected an array at " + where);
    std::vector<Point2> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(point2_at(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw SchemaError(std::string("missing field \"") + name + "\"");
    return *it;
}

}  // namespace detail

inline SimplePolygon polygon_from_json(const Json& j, const std::string& where,
                                       double eps_len) {
    if (!j.is_array() || j.empty())
        throw SchemaError("expected ring array at " + where);
    std::vector<std::vector<Point2>> rings;
    for (std::size_t r = 0; r < j.size(); ++r)
        rings.push_back(detail::points2_at(
            j[r], where + "[" + std::to_string(r) + "]"));
    auto poly = make_polygon(std::move(rings));
    validate_polygon(poly, eps_len);
    return poly;
}

inline TriMeshPolyhedron mesh_from_json(const Json& j, const std::string& where) {
    TriMeshPolyhedron mesh;
    const Json& verts = detail::field(j, "vertices");
    const Json& facets = detail::field(j, "facets");
    if (!verts.is_array() || !facets.is_array())
        throw SchemaError("mesh vertices/facets must be arrays at " + where);
    for (std::size_t i = 0; i < verts.size(); ++i)
        mesh.vertices.push_back(detail::point3_at(
            verts[i], where + ".vertices[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < facets.size(); ++i) {
        const Json& f = facets[i];
        if (!f.is_array() || f.size() != 3)
            throw SchemaError("facet must be [i, j, k] at " + where +
                              ".facets[" + std::to_string(i) + "]");
        mesh.facets.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
    }
    validate_mesh(mesh, 1e-12);
    return mesh;
}

inline Instance parse_instance(const Json& j) {
    Instance inst;
    if (!j.is_object()) throw SchemaError("instance must be a JSON object");
    const std::string kind = detail::field(j, "kind").get<std::string>();

    if (auto it = j.find("tolerances"); it != j.end()) {
        if (auto e = it->find("eps_len"); e != it->end())
            inst.eps_len_override = detail::number_at(*e, "tolerances.eps_len");
        if (auto e = it->find("eps_ang"); e != it->end())
            inst.eps_ang_override = detail::number_at(*e, "tolerances.eps_ang");
    }
    if (auto it = j.find("provenance"); it != j.end()) inst.provenance = *it;
    const double val_eps = inst.eps_len_override.value_or(1e-12);

    if (kind == "fixed2d") {
        inst.kind = InstanceKind::Fixed2D;
        inst.polygon = polygon_from_json(detail::field(j, "polygon"), "polygon",
                                         val_eps);
        inst.center2 = detail::point2_at(detail::field(j, "center"), "center");
        inst.points2 = detail::points2_at(detail::field(j, "points"), "points");
    } else if (kind == "segment2d") {
        inst.kind = InstanceKind::Segment2D;
        inst.polygon = polygon_from_json(detail::field(j, "polygon"), "polygon",
                                         val_eps);
        inst.points2 = detail::points2_at(detail::field(j, "points"), "points");
        const auto seg = detail::points2_at(detail::field(j, "segment"), "segment");
        if (seg.size() != 2)
            throw SchemaError("segment must be [[ax,ay],[bx,by]]");
        inst.segment = {seg[0], seg[1]};
    } else if (kind == "chain2d") {
        inst.kind = InstanceKind::Chain2D;
        inst.polygon = polygon_from_json(detail::field(j, "polygon"), "polygon",
                                         val_eps);
        inst.points2 = detail::points2_at(detail::field(j, "points"), "points");
        inst.chain = detail::points2_at(detail::field(j, "chain"), "chain");
        if (inst.chain.size() < 2)
            throw SchemaError("chain needs at least 2 vertices");
    } else if (kind == "fixed3d") {
        inst.kind = InstanceKind::Fixed3D;
        inst.mesh = mesh_from_json(detail::field(j, "mesh"), "mesh");
        inst.center3 = detail::point3_at(detail::field(j, "center"), "center");
        const Json& pts = detail::field(j, "points");
        for (std::size_t i = 0; i < pts.size(); ++i)
            inst.points3.push_back(detail::point3_at(
                pts[i], "points[" + std::to_string(i) + "]"));
    } else if (kind == "scp") {
        inst.kind = InstanceKind::Scp;
        const Json& a = detail::field(j, "a");
        const Json& b = detail::field(j, "b");
        if (!a.is_array() || !b.is_array())
            throw SchemaError("scp a/b must be arrays");
        for (std::size_t i = 0; i < a.size(); ++i)
            inst.scp.a.push_back(
                detail::number_at(a[i], "a[" + std::to_string(i) + "]"));
        for (const auto& iv : detail::points2_at(b, "b"))
            inst.scp.b.push_back({iv.x, iv.y});
    } else {
        throw SchemaError("unknown instance kind \"" + kind + "\"");
    }
    return inst;
}

inline Json instance_to_json(const Instance& inst) {
    Json j;
    j["kind"] = kind_name(inst.kind);
    auto rings_json = [&]() {
        Json rings = Json::array();
        for (const auto& ring : inst.polygon.rings) {
            Json r = Json::array();
            for (const auto& v : ring) r.push_back(Json::array({v.x, v.y}));
            rings.push_back(r);
        }
        return rings;
    };
    auto pts2_json = [&]() {
        Json pts = Json::array();
        for (const auto& p : inst.points2) pts.push_back(Json::array({p.x, p.y}));
        return pts;
    };
    switch (inst.kind) {
        case InstanceKind::Fixed2D:
            j["polygon"] = rings_json();
            j["center"] = Json::array({inst.center2.x, inst.center2.y});
            j["points"] = pts2_json();
            break;
        case InstanceKind::Segment2D:
            j["polygon"] = rings_json();
            j["segment"] = Json::array(
                {Json::array({inst.segment.u.x, inst.segment.u.y}),
                 Json::array({inst.segment.v.x, inst.segment.v.y})});
            j["points"] = pts2_json();
            break;
        case InstanceKind::Chain2D: {
            j["polygon"] = rings_json();
            Json chain = Json::array();
            for (const auto& v : inst.chain)
                chain.push_back(Json::array({v.x, v.y}));
            j["chain"] = chain;
            j["points"] = pts2_json();
            break;
        }
        case InstanceKind::Fixed3D: {
            Json mesh;
            Json verts = Json::array();
            for (const auto& v : inst.mesh.vertices)
                verts.push_back(Json::array({v.x, v.y, v.z}));
            Json facets = Json::array();
            for (const auto& f : inst.mesh.facets)
                facets.push_back(Json::array({f[0], f[1], f[2]}));
            mesh["vertices"] = verts;
            mesh["facets"] = facets;
            j["mesh"] = mesh;
            j["center"] = Json::array({inst.center3.x, inst.center3.y,
                                       inst.center3.z});
            Json pts = Json::array();
            for (const auto& p : inst.points3)
                pts.push_back(Json::array({p.x, p.y, p.z}));
            j["points"] = pts;
            break;
        }
        case InstanceKind::Scp: {
            j["a"] = inst.scp.a;
            Json b = Json::array();
            for (const auto& iv : inst.scp.b)
                b.push_back(Json::array({iv.first, iv.second}));
            j["b"] = b;
            break;
        }
    }
    if (inst.eps_len_override || inst.eps_ang_override) {
        Json tol;
        if (inst.eps_len_override) tol["eps_len"] = *inst.eps_len_override;
        if (inst.eps_ang_override) tol["eps_ang"] = *inst.eps_ang_override;
        j["tolerances"] = tol;
    }
    if (!inst.provenance.is_null()) j["provenance"] = inst.provenance;
    return j;
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open instance file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return parse_instance(j);
}

inline void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline void save_instance(const std::string& path, const Instance& inst) {
    save_json(path, instance_to_json(inst));
}

// ---------------------------------------------------------------------------
// Result files.

struct ResultFile {
    std::string solver;
    std::string instance_kind;
    int count = 0;
    Json witness;  // per kind: theta / (center, x, omega) / (theta, phi)
    std::optional<long> event_count;
    double wall_time_ms = 0.0;
    Json config_echo;
};

inline Json result_to_json(const ResultFile& res) {
    Json j;
    j["solver"] = res.solver;
    j["instance_kind"] = res.instance_kind;
    j["count"] = res.count;
    j["witness"] = res.witness;
    if (res.event_count) j["k"] = *res.event_count;
    j["config"] = res.config_echo;
    j["wall_time_ms"] = res.wall_time_ms;
    return j;
}

inline ResultFile result_from_json(const Json& j) {
    ResultFile res;
    res.solver = detail::field(j, "solver").get<std::string>();
    res.instance_kind = detail::field(j, "instance_kind").get<std::string>();
    res.count = detail::field(j, "count").get<int>();
    res.witness = detail::field(j, "witness");
    if (auto it = j.find("k"); it != j.end()) res.event_count = it->get<long>();
    if (auto it = j.find("config"); it != j.end()) res.config_echo = *it;
    if (auto it = j.find("wall_time_ms"); it != j.end())
        res.wall_time_ms = it->get<double>();
    return res;
}

inline void save_result(const std::string& path, const ResultFile& res) {
    save_json(path, result_to_json(res));
}

inline ResultFile load_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open result file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return result_from_json(j);
}

inline Json config_echo(const Config& cfg) {
    Json j;
    j["eps_len"] = cfg.eps_len;
    j["eps_ang"] = cfg.eps_ang;
    j["tol_omega"] = cfg.tol_omega;
    j["parallel"] = cfg.parallel;
    return j;
}

}  // namespace mcr::io
