#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mcr/config.hpp"
#include "mcr/errors.hpp"

namespace mcr {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

inline bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Segment2 {
    Point2 u;
    Point2 v;
};

inline double length(const Segment2& s) { return dist(s.u, s.v); }

struct Circle2 {
    Point2 center;
    double radius = 1.0;
};

enum class Orientation { Left, Right, Collinear };

/// Sign of twice the signed area of triangle (a, b, c). Collinear within a
/// relative band scaled by the squared extent of the triangle.
inline Orientation orientation(Point2 a, Point2 b, Point2 c,
                               double eps_area = 1e-12) {
    const double area2 = cross(b - a, c - a);
    const double scale = std::max(norm2(b - a), norm2(c - a));
    if (std::abs(area2) <= eps_area * std::max(scale, 1e-300))
        return Orientation::Collinear;
    return area2 > 0.0 ? Orientation::Left : Orientation::Right;
}

/// Counterclockwise angle in [0, 2*pi) of the ray center -> q from +x.
inline double angle_of(Point2 q, Point2 center, double eps_len = 0.0) {
    if (dist(q, center) <= eps_len)
        throw DegenerateRay("angle_of: q coincides with center");
    return wrap_angle(std::atan2(q.y - center.y, q.x - center.x));
}

/// Rotate p counterclockwise by theta about center.
inline Point2 rotate_about(Point2 p, Point2 center, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Point2 d = p - center;
    return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

/// Distance from q to segment s, and the clamped parameter of the closest
/// point along s.
inline double point_segment_distance(Point2 q, const Segment2& s,
                                     double* t_out = nullptr) {
    const Point2 d = s.v - s.u;
    const double len2 = norm2(d);
    double t = len2 > 0.0 ? dot(q - s.u, d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (t_out) *t_out = t;
    return dist(q, s.u + t * d);
}

struct CircleHit {
    Point2 point;
    double t = 0.0;       // parameter along the segment, u -> v
    bool tangent = false;
};

/// Intersection of a circle with a segment: 0-2 hits ordered by segment
/// parameter. A grazing contact (|closest distance - radius| <= eps_len) is
/// reported once with the tangent flag set.
inline std::vector<CircleHit> circle_segment_intersection(
    const Circle2& c, const Segment2& s, double eps_len) {
    std::vector<CircleHit> out;
    const Point2 d = s.v - s.u;
    const double len = norm(d);
    if (len <= eps_len) {
        // Degenerate segment: at most a touch.
        if (std::abs(dist(s.u, c.center) - c.radius) <= eps_len)
            out.push_back({s.u, 0.0, true});
        return out;
    }
    const Point2 dir = (1.0 / len) * d;
    const Point2 m = c.center - s.u;
    const double proj = dot(m, dir);              // distance of foot along dir
    const double h2 = std::max(0.0, norm2(m) - proj * proj);
    const double h = std::sqrt(h2);               // line-center distance
    const double t_eps = eps_len / len;

    if (h >= c.radius - eps_len) {
        if (h <= c.radius + eps_len) {
            // Tangent to the supporting line; report if the foot is on s.
            const double t = proj / len;
            if (t >= -t_eps && t <= 1.0 + t_eps) {
                const double tc = std::clamp(t, 0.0, 1.0);
                out.push_back({s.u + tc * d, tc, true});
            }
        }
        return out;
    }
    const double half = std::sqrt(std::max(0.0, c.radius * c.radius - h2));
    for (double a : {proj - half, proj + half}) {
        const double t = a / len;
        if (t >= -t_eps && t <= 1.0 + t_eps) {
            const double tc = std::clamp(t, 0.0, 1.0);
            out.push_back({s.u + tc * d, tc, false});
        }
    }
    return out;
}

/// Intersection points of two circles (0-2). Throws CoincidentCircles when
/// the circles agree within tolerance; callers must handle overlap
/// explicitly.
inline std::vector<Point2> circle_circle_intersection(const Circle2& c1,
                                                      const Circle2& c2,
                                                      double eps_len) {
    const double d = dist(c1.center, c2.center);
    if (d <= eps_len && std::abs(c1.radius - c2.radius) <= eps_len)
        throw CoincidentCircles("circle_circle_intersection: identical circles");
    std::vector<Point2> out;
    if (d > c1.radius + c2.radius + eps_len) return out;
    if (d < std::abs(c1.radius - c2.radius) - eps_len) return out;
    if (d <= eps_len) return out;  // concentric, different radii
    const double a =
        (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    const double h2 = c1.radius * c1.radius - a * a;
    const Point2 dir = (1.0 / d) * (c2.center - c1.center);
    const Point2 foot = c1.center + a * dir;
    if (h2 <= eps_len * eps_len) {
        out.push_back(foot);
        return out;
    }
    const double h = std::sqrt(h2);
    const Point2 off{-dir.y * h, dir.x * h};
    out.push_back(foot + off);
    out.push_back(foot - off);
    return out;
}

// ---------------------------------------------------------------------------
// Simple polygon (outer ring counterclockwise, holes clockwise).

struct SimplePolygon {
    std::vector<std::vector<Point2>> rings;  // rings[0] = outer
    std::vector<Segment2> edge_list;         // derived, flattened

    const std::vector<Segment2>& edges() const { return edge_list; }
};

inline double ring_signed_area(const std::vector<Point2>& ring) {
    double a = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point2& p = ring[i];
        const Point2& q = ring[(i + 1) % ring.size()];
        a += cross(p, q);
    }
    return 0.5 * a;
}

inline void rebuild_edges(SimplePolygon& poly) {
    poly.edge_list.clear();
    for (const auto& ring : poly.rings)
        for (std::size_t i = 0; i < ring.size(); ++i)
            poly.edge_list.push_back({ring[i], ring[(i + 1) % ring.size()]});
}

/// Build a polygon from vertex rings, orienting the outer ring
/// counterclockwise and holes clockwise. Does not run the full simplicity
/// check; see validate_polygon.
inline SimplePolygon make_polygon(std::vector<std::vector<Point2>> rings) {
    if (rings.empty()) throw SchemaError("polygon: no rings");
    for (auto& r : rings)
        if (r.size() < 3) throw SchemaError("polygon: ring with < 3 vertices");
    if (ring_signed_area(rings[0]) < 0.0)
        std::reverse(rings[0].begin(), rings[0].end());
    for (std::size_t i = 1; i < rings.size(); ++i)
        if (ring_signed_area(rings[i]) > 0.0)
            std::reverse(rings[i].begin(), rings[i].end());
    SimplePolygon poly;
    poly.rings = std::move(rings);
    rebuild_edges(poly);
    return poly;
}

enum class Containment { Inside, Boundary, Outside };

/// Even-odd classification over all rings, with a closed boundary band:
/// points within eps_len of any edge report Boundary. Downstream code treats
/// Boundary as contained.
inline Containment point_in_polygon(const SimplePolygon& poly, Point2 q,
                                    double eps_len) {
    bool inside = false;
    for (const auto& e : poly.edge_list) {
        if (point_segment_distance(q, e) <= eps_len)
            return Containment::Boundary;
        const bool above_u = e.u.y > q.y;
        const bool above_v = e.v.y > q.y;
        if (above_u != above_v) {
            const double xint =
                e.u.x + (q.y - e.u.y) * (e.v.x - e.u.x) / (e.v.y - e.u.y);
            if (xint > q.x) inside = !inside;
        }
    }
    return inside ? Containment::Inside : Containment::Outside;
}

// ---------------------------------------------------------------------------
// Segment-segment predicates (used by polygon validation and generators).

/// True when the closed segments share at least one point (within eps via
/// the distance fallback for near-degenerate configurations).
inline bool segments_intersect(const Segment2& s1, const Segment2& s2,
                               double eps_len) {
    const auto o1 = orientation(s1.u, s1.v, s2.u);
    const auto o2 = orientation(s1.u, s1.v, s2.v);
    const auto o3 = orientation(s2.u, s2.v, s1.u);
    const auto o4 = orientation(s2.u, s2.v, s1.v);
    if (o1 != o2 && o3 != o4 && o1 != Orientation::Collinear &&
        o2 != Orientation::Collinear && o3 != Orientation::Collinear &&
        o4 != Orientation::Collinear)
        return true;
    // Near-collinear or touching cases: fall back to distances.
    if (point_segment_distance(s2.u, s1) <= eps_len) return true;
    if (point_segment_distance(s2.v, s1) <= eps_len) return true;
    if (point_segment_distance(s1.u, s2) <= eps_len) return true;
    if (point_segment_distance(s1.v, s2) <= eps_len) return true;
    return false;
}

/// O(e^2) load-time validation: finite coordinates, ring sizes, ring
/// simplicity, pairwise ring disjointness, and holes strictly inside the
/// outer ring. Throws SchemaError with a description of the first failure.
inline void validate_polygon(const SimplePolygon& poly, double eps_len) {
    for (const auto& ring : poly.rings) {
        if (ring.size() < 3) throw SchemaError("polygon: ring with < 3 vertices");
        for (const auto& p : ring)
            if (!finite(p)) throw SchemaError("polygon: non-finite coordinate");
        for (std::size_t i = 0; i < ring.size(); ++i)
            if (dist(ring[i], ring[(i + 1) % ring.size()]) <= eps_len)
                throw SchemaError("polygon: zero-length edge");
    }
    // Edges with ring/vertex provenance for adjacency-aware checks.
    struct Ref { std::size_t ring, idx; Segment2 seg; };
    std::vector<Ref> refs;
    for (std::size_t r = 0; r < poly.rings.size(); ++r) {
        const auto& ring = poly.rings[r];
        for (std::size_t i = 0; i < ring.size(); ++i)
            refs.push_back({r, i, {ring[i], ring[(i + 1) % ring.size()]}});
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
        for (std::size_t j = i + 1; j < refs.size(); ++j) {
            const Ref& A = refs[i];
            const Ref& B = refs[j];
            if (A.ring == B.ring) {
                const std::size_t n = poly.rings[A.ring].size();
                const bool adjacent =
                    (B.idx == (A.idx + 1) % n) || (A.idx == (B.idx + 1) % n);
                if (adjacent) {
                    // Shared endpoint only; reject collinear overlap.
                    const Segment2& fst = (B.idx == (A.idx + 1) % n) ? A.seg : B.seg;
                    const Segment2& snd = (B.idx == (A.idx + 1) % n) ? B.seg : A.seg;
                    const Point2 far_pt = snd.v;
                    double t = 0.0;
                    if (point_segment_distance(far_pt, fst, &t) <= eps_len)
                        throw SchemaError("polygon: overlapping adjacent edges");
                    continue;
                }
            }
            if (segments_intersect(A.seg, B.seg, eps_len))
                throw SchemaError("polygon: self-intersecting or touching rings");
        }
    }
    // Holes strictly inside the outer ring.
    if (poly.rings.size() > 1) {
        SimplePolygon outer = make_polygon({poly.rings[0]});
        for (std::size_t r = 1; r < poly.rings.size(); ++r)
            for (const auto& p : poly.rings[r])
                if (point_in_polygon(outer, p, eps_len) != Containment::Inside)
                    throw SchemaError("polygon: hole not strictly inside outer ring");
    }
}

/// Max pairwise extent of a point cloud; used to scale eps_len.
inline double diameter_of(const std::vector<Point2>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, dist(pts[i], pts[j]));
    return best;
}

inline std::vector<Point2> gather_points(const SimplePolygon& poly,
                                         const std::vector<Point2>& extra) {
    std::vector<Point2> pts;
    for (const auto& ring : poly.rings)
        pts.insert(pts.end(), ring.begin(), ring.end());
    pts.insert(pts.end(), extra.begin(), extra.end());
    return pts;
}

inline Config make_config_2d(const SimplePolygon& poly,
                             const std::vector<Point2>& extra) {
    return Config::for_diameter(diameter_of(gather_points(poly, extra)));
}

}  // namespace mcr
