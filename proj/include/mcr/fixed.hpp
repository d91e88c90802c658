#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "mcr/angular.hpp"
#include "mcr/config.hpp"
#include "mcr/errors.hpp"
#include "mcr/geom.hpp"
#include "mcr/util.hpp"

namespace mcr {

struct RotationEvent {
    double angle = 0.0;  // rotation of S, counterclockwise, in [0, 2*pi)
    enum Kind { InEvent, OutEvent } kind = InEvent;
    std::size_t point_index = 0;
    std::size_t edge_index = 0;
};

namespace detail {

/// Classify a transversal crossing of the orbit circle against an edge.
/// The moving point travels counterclockwise; the polygon interior lies to
/// the left of every directed edge (outer ring CCW, holes CW), so a left
/// turn of (edge direction, motion direction) is an in-event.
inline int crossing_sign(Point2 q, Point2 r, const Segment2& edge) {
    const Point2 motion{-(q.y - r.y), q.x - r.x};
    const double c = cross(edge.v - edge.u, motion);
    const double scale = norm(edge.v - edge.u) * norm(motion);
    if (scale <= 0.0 || std::abs(c) <= 1e-9 * scale) return 0;
    return c > 0.0 ? +1 : -1;
}

}  // namespace detail

/// The rotation angles (of S about r, counterclockwise) that place p inside
/// the closed polygon, as disjoint closed arcs. A point at the center
/// (|p - r| <= eps_len) degenerates to full circle or empty depending on
/// whether r itself is contained. When events_out is given it receives the
/// classified in/out events for this point.
inline AngularIntervalSet point_rotation_intervals(
    const SimplePolygon& poly, Point2 r, Point2 p, const Config& cfg,
    std::size_t point_index = 0,
    std::vector<RotationEvent>* events_out = nullptr) {
    AngularIntervalSet out;
    out.point_index = point_index;

    const double radius = dist(p, r);
    if (radius <= cfg.eps_len) {
        if (point_in_polygon(poly, r, cfg.eps_len) != Containment::Outside)
            out.full_circle = true;
        else
            out.empty = true;
        return out;
    }

    const double alpha_p = angle_of(p, r);
    const Circle2 orbit{r, radius};
    std::vector<double> angles;
    for (std::size_t e = 0; e < poly.edge_list.size(); ++e) {
        for (const auto& hit :
             circle_segment_intersection(orbit, poly.edge_list[e], cfg.eps_len)) {
            const double omega = wrap_angle(angle_of(hit.point, r) - alpha_p);
            angles.push_back(omega);
            if (events_out && !hit.tangent) {
                const int sgn = detail::crossing_sign(hit.point, r, poly.edge_list[e]);
                if (sgn != 0)
                    events_out->push_back({omega,
                                           sgn > 0 ? RotationEvent::InEvent
                                                   : RotationEvent::OutEvent,
                                           point_index, e});
            }
        }
    }
    return stitch_intervals(
        std::move(angles),
        [&](double theta) {
            return point_in_polygon(poly, rotate_about(p, r, theta),
                                    cfg.eps_len) != Containment::Outside;
        },
        cfg.eps_ang, point_index);
}

/// Fixed-center solver: per-point interval sets, then a circular sweep.
/// Angles rotate the point set counterclockwise about r; rotating the
/// polygon clockwise by the same angle is the equivalent view, so the
/// reported witness serves both readings directly.
inline CoverageSolution solve_fixed_baseline(const SimplePolygon& poly,
                                             Point2 r,
                                             const std::vector<Point2>& points,
                                             const Config& cfg) {
    std::vector<AngularIntervalSet> sets(points.size());
    parallel_for(points.size(), cfg.parallel, [&](std::size_t i) {
        sets[i] = point_rotation_intervals(poly, r, points[i], cfg, i);
    });
    return sweep_max_coverage(sets, cfg.eps_ang);
}

/// Split every edge at the foot of the perpendicular from r when the foot
/// lies strictly inside the edge. Afterwards no edge meets a circle
/// centered at r more than once (distance to r is monotone along each
/// edge).
inline SimplePolygon normalize_polygon(const SimplePolygon& poly, Point2 r,
                                       const Config& cfg) {
    SimplePolygon out;
    out.rings.reserve(poly.rings.size());
    for (const auto& ring : poly.rings) {
        std::vector<Point2> next;
        next.reserve(2 * ring.size());
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point2 u = ring[i];
            const Point2 v = ring[(i + 1) % ring.size()];
            next.push_back(u);
            const Point2 d = v - u;
            const double len2 = norm2(d);
            if (len2 <= 0.0) continue;
            const double t = dot(r - u, d) / len2;
            const double margin = cfg.eps_len / std::sqrt(len2);
            if (t > margin && t < 1.0 - margin) next.push_back(u + t * d);
        }
        out.rings.push_back(std::move(next));
    }
    rebuild_edges(out);
    return out;
}

struct SensitiveResult {
    CoverageSolution solution;
    long event_count = 0;  // k: total in/out events over all points
};

/// Output-sensitive fixed-center solver: normalize, then grow a sweeping
/// circle over the radius-sorted vertices and points, keeping the set of
/// edges crossed by the current circle. Each point's crossings come from
/// walking that active set only.
inline SensitiveResult solve_fixed_output_sensitive(
    const SimplePolygon& poly, Point2 r, const std::vector<Point2>& points,
    const Config& cfg) {
    const SimplePolygon norm_poly = normalize_polygon(poly, r, cfg);
    const auto& edges = norm_poly.edge_list;

    struct EdgeEvent {
        double rho;
        bool insert;
        std::size_t edge;
    };
    std::vector<EdgeEvent> edge_events;
    edge_events.reserve(2 * edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double du = dist(edges[e].u, r);
        const double dv = dist(edges[e].v, r);
        edge_events.push_back({std::min(du, dv), true, e});
        edge_events.push_back({std::max(du, dv), false, e});
    }
    std::sort(edge_events.begin(), edge_events.end(),
              [](const EdgeEvent& a, const EdgeEvent& b) {
                  if (a.rho != b.rho) return a.rho < b.rho;
                  if (a.insert != b.insert) return a.insert;
                  return a.edge < b.edge;
              });

    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = dist(points[a], r), db = dist(points[b], r);
        if (da != db) return da < db;
        return a < b;
    });

    std::set<std::size_t> active;  // edge indices crossed by the sweep circle
    std::size_t cursor = 0;
    std::vector<AngularIntervalSet> sets(points.size());
    long k = 0;

    for (std::size_t oi : order) {
        const Point2 p = points[oi];
        const double rho = dist(p, r);

        // Advance edge events strictly below the tolerance band around rho.
        while (cursor < edge_events.size() &&
               edge_events[cursor].rho < rho - cfg.eps_len) {
            const auto& ev = edge_events[cursor++];
            if (ev.insert) active.insert(ev.edge);
            else active.erase(ev.edge);
        }

        if (rho <= cfg.eps_len) {
            AngularIntervalSet s;
            s.point_index = oi;
            if (point_in_polygon(norm_poly, r, cfg.eps_len) != Containment::Outside)
                s.full_circle = true;
            else
                s.empty = true;
            sets[oi] = s;
            continue;
        }

        // Candidate edges: the active set plus edges whose insert/remove
        // radius falls inside the band (endpoint grazings).
        std::set<std::size_t> candidates = active;
        for (std::size_t j = cursor;
             j < edge_events.size() && edge_events[j].rho <= rho + cfg.eps_len;
             ++j)
            candidates.insert(edge_events[j].edge);

        const double alpha_p = angle_of(p, r);
        const Circle2 orbit{r, rho};
        std::vector<double> angles;
        for (std::size_t e : candidates) {
            for (const auto& hit :
                 circle_segment_intersection(orbit, edges[e], cfg.eps_len)) {
                angles.push_back(wrap_angle(angle_of(hit.point, r) - alpha_p));
                if (!hit.tangent &&
                    detail::crossing_sign(hit.point, r, edges[e]) != 0)
                    ++k;
            }
        }
        sets[oi] = stitch_intervals(
            std::move(angles),
            [&](double theta) {
                return point_in_polygon(norm_poly, rotate_about(p, r, theta),
                                        cfg.eps_len) != Containment::Outside;
            },
            cfg.eps_ang, oi);
    }

    SensitiveResult res;
    res.solution = sweep_max_coverage(sets, cfg.eps_ang);
    res.event_count = k;
    return res;
}

// ---------------------------------------------------------------------------
// 3SUM-hardness reduction: Segments Containing Points -> Fixed MCR.

struct ScpInstance {
    std::vector<double> a;                        // points on the line
    std::vector<std::pair<double, double>> b;     // disjoint closed intervals
};

struct ScpReduction {
    SimplePolygon polygon;
    Point2 center{0.0, 0.0};
    std::vector<Point2> points;
    double radius = 0.0;
    double i_lo = 0.0;
    double scale = 0.0;  // radians per unit: angle(t) = scale * (t - i_lo)
};

/// Wrap the instance interval onto half of a circle of perimeter 2|I|.
/// Points of A map to the circle; each interval of B becomes a "gear tooth"
/// whose boundary runs through tangent-intersection vertices outside the
/// circle, so the interval's arc lies inside the polygon while the gap arcs
/// (cut off by chords) lie outside. A rotation by scale*u then corresponds
/// exactly to the 1D shift u.
inline ScpReduction reduce_scp_to_mcr(const std::vector<double>& a_vals,
                                      std::vector<std::pair<double, double>> b_ivs) {
    if (b_ivs.empty()) throw InvalidScp("scp: no intervals");
    std::sort(b_ivs.begin(), b_ivs.end());
    for (const auto& iv : b_ivs)
        if (!(iv.first < iv.second))
            throw InvalidScp("scp: empty or reversed interval");
    for (std::size_t i = 1; i < b_ivs.size(); ++i)
        if (b_ivs[i].first <= b_ivs[i - 1].second)
            throw InvalidScp("scp: overlapping intervals");

    double lo = b_ivs.front().first, hi = b_ivs.back().second;
    for (double a : a_vals) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    if (!(hi > lo)) hi = lo + 1.0;

    ScpReduction red;
    red.i_lo = lo;
    const double len = hi - lo;
    red.radius = len / kPi;  // perimeter 2*len
    red.scale = kPi / len;

    auto on_circle = [&](double phi) -> Point2 {
        return {red.radius * std::cos(phi), red.radius * std::sin(phi)};
    };
    auto angle_at = [&](double t) { return red.scale * (t - lo); };

    for (double a : a_vals) red.points.push_back(on_circle(angle_at(a)));

    std::vector<Point2> ring;
    const double max_arc = kPi / 8.0;
    for (const auto& iv : b_ivs) {
        const double phi1 = angle_at(iv.first);
        const double phi2 = angle_at(iv.second);
        const int subdiv =
            std::max(1, static_cast<int>(std::ceil((phi2 - phi1) / max_arc)));
        ring.push_back(on_circle(phi1));
        for (int s = 0; s < subdiv; ++s) {
            const double a0 = phi1 + (phi2 - phi1) * s / subdiv;
            const double a1 = phi1 + (phi2 - phi1) * (s + 1) / subdiv;
            const double half = 0.5 * (a1 - a0);
            const double apex_r = red.radius / std::cos(half);
            ring.push_back(apex_r * Point2{std::cos(0.5 * (a0 + a1)),
                                           std::sin(0.5 * (a0 + a1))});
            ring.push_back(on_circle(a1));
        }
    }
    red.polygon = make_polygon({ring});
    return red;
}

}  // namespace mcr
