#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "mcr/config.hpp"
#include "mcr/errors.hpp"
#include "mcr/geom.hpp"

namespace mcr {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }

inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(Point3 a) { return dot(a, a); }
inline double norm(Point3 a) { return std::sqrt(norm2(a)); }
inline double dist(Point3 a, Point3 b) { return norm(a - b); }
inline bool finite(Point3 p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

inline Point3 normalized(Point3 a) {
    const double n = norm(a);
    if (n == 0.0) throw DegenerateRay("normalized: zero vector");
    return (1.0 / n) * a;
}

/// Plane n . x = c with unit normal n.
struct Plane3 {
    Point3 n{0.0, 0.0, 1.0};
    double c = 0.0;
};

inline Plane3 plane_through(Point3 a, Point3 b, Point3 c) {
    const Point3 n = normalized(cross(b - a, c - a));
    return {n, dot(n, a)};
}

struct Circle3 {
    Point3 center;
    double radius = 0.0;
    Point3 normal{0.0, 0.0, 1.0};  // unit
};

/// Arc of a Circle3 between two angles measured in the circle's own frame
/// (axes built deterministically from the normal). Extent in (0, 2*pi].
struct Arc3 {
    Circle3 circle;
    double start = 0.0;
    double end = kTwoPi;  // start + extent, may exceed 2*pi

    double extent() const { return end - start; }
};

/// Deterministic orthonormal frame (e1, e2) spanning the plane with unit
/// normal n; e1 x e2 = n.
inline std::pair<Point3, Point3> plane_frame(Point3 n) {
    const Point3 h = std::abs(n.x) < 0.9 ? Point3{1.0, 0.0, 0.0}
                                         : Point3{0.0, 1.0, 0.0};
    const Point3 e1 = normalized(h - dot(h, n) * n);
    return {e1, cross(n, e1)};
}

inline Point3 arc_point(const Arc3& arc, double t) {
    const auto [e1, e2] = plane_frame(arc.circle.normal);
    const double a = arc.start + t * (arc.end - arc.start);
    return arc.circle.center +
           arc.circle.radius * (std::cos(a) * e1) +
           arc.circle.radius * (std::sin(a) * e2);
}

struct SpherePlaneResult {
    enum Kind { None, TangentPoint, Circle } kind = None;
    Point3 point;    // tangent point when kind == TangentPoint
    Circle3 circle;  // when kind == Circle
};

/// Sphere/plane intersection. The circle center is the foot of the
/// perpendicular from the sphere center; tangency within eps_len.
inline SpherePlaneResult sphere_plane_intersection(Point3 center, double radius,
                                                   const Plane3& pl,
                                                   double eps_len) {
    SpherePlaneResult res;
    const double signed_d = dot(pl.n, center) - pl.c;
    const double d = std::abs(signed_d);
    const Point3 foot = center - signed_d * pl.n;
    if (std::abs(d - radius) <= eps_len) {
        res.kind = SpherePlaneResult::TangentPoint;
        res.point = foot;
        return res;
    }
    if (d > radius) return res;
    res.kind = SpherePlaneResult::Circle;
    res.circle = {foot, std::sqrt(std::max(0.0, radius * radius - d * d)), pl.n};
    return res;
}

// ---------------------------------------------------------------------------
// Triangle mesh polyhedron.

struct TriMeshPolyhedron {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 3>> facets;  // outward-oriented triangles
    bool outward = true;

    std::array<Point3, 3> facet_points(std::size_t f) const {
        return {vertices[static_cast<std::size_t>(facets[f][0])],
                vertices[static_cast<std::size_t>(facets[f][1])],
                vertices[static_cast<std::size_t>(facets[f][2])]};
    }
};

inline double mesh_signed_volume(const TriMeshPolyhedron& m) {
    double v = 0.0;
    for (std::size_t f = 0; f < m.facets.size(); ++f) {
        const auto t = m.facet_points(f);
        v += dot(t[0], cross(t[1], t[2])) / 6.0;
    }
    return v;
}

/// Distance from q to the closed triangle (a, b, c).
inline double point_triangle_distance(Point3 q, Point3 a, Point3 b, Point3 c) {
    // Ericson-style region tests via barycentric candidates.
    const Point3 ab = b - a, ac = c - a, aq = q - a;
    const double d1 = dot(ab, aq), d2 = dot(ac, aq);
    if (d1 <= 0.0 && d2 <= 0.0) return dist(q, a);
    const Point3 bq = q - b;
    const double d3 = dot(ab, bq), d4 = dot(ac, bq);
    if (d3 >= 0.0 && d4 <= d3) return dist(q, b);
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double t = d1 / (d1 - d3);
        return dist(q, a + t * ab);
    }
    const Point3 cq = q - c;
    const double d5 = dot(ab, cq), d6 = dot(ac, cq);
    if (d6 >= 0.0 && d5 <= d6) return dist(q, c);
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double t = d2 / (d2 - d6);
        return dist(q, a + t * ac);
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return dist(q, b + t * (c - b));
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return dist(q, a + v * ab + w * ac);
}

/// True when q lies within the closed triangle, at distance <= eps from it.
inline bool point_in_triangle(Point3 q, Point3 a, Point3 b, Point3 c,
                              double eps) {
    return point_triangle_distance(q, a, b, c) <= eps;
}

namespace detail {

/// Moller-Trumbore with degeneracy reporting: hit is valid only when the
/// ray is comfortably transversal and the hit avoids the triangle border.
struct RayHit3 {
    bool hit = false;
    bool degenerate = false;
    double t = 0.0;
};

inline RayHit3 ray_triangle(Point3 orig, Point3 dir, Point3 a, Point3 b,
                            Point3 c, double eps) {
    RayHit3 r;
    const Point3 e1 = b - a, e2 = c - a;
    const Point3 pv = cross(dir, e2);
    const double det = dot(e1, pv);
    const double scale = std::sqrt(norm2(e1) * norm2(e2));
    if (std::abs(det) <= 1e-12 * scale) {
        // Nearly parallel: degenerate only if the ray passes close by.
        r.degenerate = true;
        return r;
    }
    const double inv = 1.0 / det;
    const Point3 tv = orig - a;
    const double u = dot(tv, pv) * inv;
    const Point3 qv = cross(tv, e1);
    const double v = dot(dir, qv) * inv;
    const double t = dot(e2, qv) * inv;
    const double band = 1e-10;
    if (u < -band || v < -band || u + v > 1.0 + band) return r;
    if (t <= eps) {
        if (t > -eps) r.degenerate = true;  // origin on the triangle plane
        return r;
    }
    if (u < band || v < band || u + v > 1.0 - band) {
        r.degenerate = true;  // grazing an edge or vertex
        return r;
    }
    r.hit = true;
    r.t = t;
    return r;
}

}  // namespace detail

/// Ray-parity classification with a facet-distance boundary band. The ray
/// direction is deterministic; near-degenerate hits trigger a re-cast along
/// the next direction in a fixed sequence.
inline Containment point_in_polyhedron(const TriMeshPolyhedron& m, Point3 q,
                                       double eps_len) {
    for (std::size_t f = 0; f < m.facets.size(); ++f) {
        const auto t = m.facet_points(f);
        // Cheap plane-distance prefilter before the full triangle distance.
        const Point3 n = cross(t[1] - t[0], t[2] - t[0]);
        const double nn = norm(n);
        if (nn > 0.0 &&
            std::abs(dot(n, q - t[0])) / nn > eps_len)
            continue;
        if (point_triangle_distance(q, t[0], t[1], t[2]) <= eps_len)
            return Containment::Boundary;
    }
    // Fixed direction sequence; a simple LCG supplies further fallbacks.
    static const Point3 dirs[] = {
        {0.2875368374988243, 0.5893742198343571, 0.7549812376427341},
        {-0.6412378562341287, 0.3178654123987456, 0.6984521376127835},
        {0.8123456789012345, -0.4123456789012345, 0.4123456789012345},
    };
    std::uint64_t lcg = 0x2545F4914F6CDD1DULL;
    for (int attempt = 0; attempt < 32; ++attempt) {
        Point3 dir;
        if (attempt < 3) {
            dir = dirs[attempt];
        } else {
            lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
            const double a = kTwoPi * static_cast<double>(lcg >> 40) / 16777216.0;
            lcg = lcg * 6364136223846793005ULL + 1442695040888963407ULL;
            const double z = 2.0 * static_cast<double>(lcg >> 40) / 16777216.0 - 1.0;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            dir = {r * std::cos(a), r * std::sin(a), z};
        }
        dir = normalized(dir);
        int crossings = 0;
        bool bad = false;
        for (std::size_t f = 0; f < m.facets.size() && !bad; ++f) {
            const auto t = m.facet_points(f);
            const auto hit = detail::ray_triangle(q, dir, t[0], t[1], t[2], eps_len);
            if (hit.degenerate) bad = true;
            else if (hit.hit) ++crossings;
        }
        if (!bad)
            return (crossings % 2 == 1) ? Containment::Inside : Containment::Outside;
    }
    // Every cast grazed something; the point is effectively on the skin.
    return Containment::Boundary;
}

// ---------------------------------------------------------------------------
// Mesh validation.

namespace detail {

inline bool segment_triangle_intersect(Point3 p, Point3 q, Point3 a, Point3 b,
                                       Point3 c, double eps) {
    const Point3 n = cross(b - a, c - a);
    const double nn = norm(n);
    if (nn == 0.0) return false;
    const double dp = dot(n, p - a), dq = dot(n, q - a);
    if ((dp > eps * nn && dq > eps * nn) || (dp < -eps * nn && dq < -eps * nn))
        return false;
    if (std::abs(dp - dq) <= 1e-300) return false;  // coplanar handled by caller
    const double t = dp / (dp - dq);
    if (t < -eps || t > 1.0 + eps) return false;
    const Point3 x = p + std::clamp(t, 0.0, 1.0) * (q - p);
    return point_in_triangle(x, a, b, c, eps * std::max(1.0, nn));
}

}  // namespace detail

/// Closed 2-manifold + consistent winding + (optional) pairwise
/// non-self-intersection check. Flips all facets when the signed volume is
/// negative so the orientation flag can be honored.
inline void validate_mesh(TriMeshPolyhedron& m, double eps_len,
                          bool check_self_intersection = true) {
    if (m.vertices.size() < 4 || m.facets.size() < 4)
        throw SchemaError("mesh: too few vertices or facets");
    for (const auto& v : m.vertices)
        if (!finite(v)) throw SchemaError("mesh: non-finite vertex");
    const int nv = static_cast<int>(m.vertices.size());
    std::map<std::pair<int, int>, int> edge_use;  // directed edges
    for (const auto& f : m.facets) {
        for (int i = 0; i < 3; ++i) {
            if (f[i] < 0 || f[i] >= nv)
                throw SchemaError("mesh: facet index out of range");
            if (f[i] == f[(i + 1) % 3])
                throw SchemaError("mesh: degenerate facet");
            ++edge_use[{f[i], f[(i + 1) % 3]}];
        }
    }
    for (const auto& [e, count] : edge_use) {
        if (count != 1)
            throw SchemaError("mesh: inconsistent winding (repeated directed edge)");
        auto it = edge_use.find({e.second, e.first});
        if (it == edge_use.end() || it->second != 1)
            throw SchemaError("mesh: not a closed 2-manifold");
    }
    if (mesh_signed_volume(m) < 0.0) {
        for (auto& f : m.facets) std::swap(f[1], f[2]);
        m.outward = true;
    }
    if (!check_self_intersection) return;
    for (std::size_t i = 0; i < m.facets.size(); ++i) {
        for (std::size_t j = i + 1; j < m.facets.size(); ++j) {
            const auto& fa = m.facets[i];
            const auto& fb = m.facets[j];
            bool share = false;
            for (int u : fa)
                for (int v : fb)
                    if (u == v) share = true;
            if (share) continue;  // adjacency handled by manifold check
            const auto ta = m.facet_points(i);
            const auto tb = m.facet_points(j);
            for (int e = 0; e < 3 && !share; ++e) {
                if (detail::segment_triangle_intersect(ta[e], ta[(e + 1) % 3],
                                                       tb[0], tb[1], tb[2], 1e-12) ||
                    detail::segment_triangle_intersect(tb[e], tb[(e + 1) % 3],
                                                       ta[0], ta[1], ta[2], 1e-12))
                    throw SchemaError("mesh: self-intersecting facets");
            }
        }
    }
    (void)eps_len;
}

inline double diameter_of_3d(const std::vector<Point3>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, dist(pts[i], pts[j]));
    return best;
}

inline Config make_config_3d(const TriMeshPolyhedron& m,
                             const std::vector<Point3>& extra) {
    std::vector<Point3> pts = m.vertices;
    pts.insert(pts.end(), extra.begin(), extra.end());
    return Config::for_diameter(diameter_of_3d(pts));
}

}  // namespace mcr
