#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mcr/config.hpp"
#include "mcr/geom.hpp"
#include "mcr/geom3.hpp"
#include "mcr/util.hpp"

// Brute-force verifiers. They re-derive rotation events from scratch with
// their own circle-line algebra and share nothing with the solvers beyond
// the geom_core predicates, so a bug in the solver pipeline cannot hide in
// its own oracle.

namespace mcr::oracle {

struct OracleReport {
    int best_count = 0;
    double witness_theta = 0.0;
    Point2 witness_center{0.0, 0.0};   // segment oracle
    double witness_phi = 0.0;          // 3d oracle
    long candidates = 0;
    std::string method;
};

/// Objective evaluated at a single rotation: rotate every point of S
/// counterclockwise by theta about r and count closed containment.
inline int count_at_rotation(const SimplePolygon& poly, Point2 r,
                             const std::vector<Point2>& points, double theta,
                             const Config& cfg) {
    int c = 0;
    for (const auto& p : points)
        if (point_in_polygon(poly, rotate_about(p, r, theta), cfg.eps_len) !=
            Containment::Outside)
            ++c;
    return c;
}

namespace detail {

/// Rotation angles at which the rotated copy of p crosses the supporting
/// line of an edge and lands on the edge. Solved as A cos t + B sin t = C,
/// independent of the solvers' quadratic-in-segment-parameter route.
inline void edge_event_angles(Point2 r, Point2 p, const Segment2& edge,
                              double eps_len, std::vector<double>& out) {
    const Point2 d = p - r;
    const Point2 ev = edge.v - edge.u;
    const Point2 n{-ev.y, ev.x};
    const double A = dot(n, d);
    const double B = cross(d, n);
    const double C = dot(n, edge.u) - dot(n, r);
    const double r0 = std::hypot(A, B);
    if (r0 <= 1e-15 * std::max(1.0, norm(n) * norm(d))) return;
    const double ratio = C / r0;
    if (std::abs(ratio) > 1.0 + 1e-12) return;
    const double phi = std::atan2(B, A);
    const double acc = std::acos(std::clamp(ratio, -1.0, 1.0));
    const double len2 = norm2(ev);
    for (double theta : {phi + acc, phi - acc}) {
        const Point2 q = rotate_about(p, r, theta);
        const double t = dot(q - edge.u, ev) / len2;
        const double t_eps = eps_len / std::sqrt(len2);
        if (t >= -t_eps && t <= 1.0 + t_eps) out.push_back(wrap_angle(theta));
    }
}

inline std::vector<double> all_event_angles(const SimplePolygon& poly, Point2 r,
                                            Point2 p, double eps_len) {
    std::vector<double> angles;
    if (dist(p, r) <= eps_len) return angles;
    for (const auto& e : poly.edge_list)
        edge_event_angles(r, p, e, eps_len, angles);
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    return angles;
}

/// Exact fixed-center optimum computed from per-point containment arcs.
/// Used inside the grid oracle where the full candidate sweep would be too
/// slow; agrees with oracle_fixed by construction (tested).
inline int exact_count_at_center(const SimplePolygon& poly, Point2 r,
                                 const std::vector<Point2>& points,
                                 const Config& cfg, double* theta_out) {
    struct Arcs {
        std::vector<double> events;        // sorted
        std::vector<bool> arc_in;          // arc i = (events[i], events[i+1])
        bool no_events_inside = false;
        bool no_events_outside = false;
    };
    std::vector<Arcs> all(points.size());
    std::vector<double> candidates;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Arcs& a = all[i];
        a.events = all_event_angles(poly, r, points[i], cfg.eps_len);
        if (a.events.empty()) {
            const bool in = point_in_polygon(poly, points[i], cfg.eps_len) !=
                            Containment::Outside;
            a.no_events_inside = in;
            a.no_events_outside = !in;
            continue;
        }
        const std::size_t k = a.events.size();
        a.arc_in.resize(k);
        for (std::size_t j = 0; j < k; ++j) {
            const double lo = a.events[j];
            const double hi = j + 1 < k ? a.events[j + 1] : a.events[0] + kTwoPi;
            const double mid = wrap_angle(0.5 * (lo + hi));
            a.arc_in[j] = point_in_polygon(poly, rotate_about(points[i], r, mid),
                                           cfg.eps_len) != Containment::Outside;
            candidates.push_back(a.events[j]);
            candidates.push_back(mid);
        }
    }
    if (candidates.empty()) candidates.push_back(0.0);

    auto member = [&](const Arcs& a, std::size_t pi, double theta) {
        if (a.no_events_inside) return true;
        if (a.no_events_outside) return false;
        // Event angles are boundary touches: contained.
        for (double e : a.events)
            if (angles_equal(e, theta, cfg.eps_ang)) return true;
        auto it = std::upper_bound(a.events.begin(), a.events.end(), theta);
        const std::size_t arc =
            (it == a.events.begin() || it == a.events.end())
                ? a.events.size() - 1
                : static_cast<std::size_t>(it - a.events.begin()) - 1;
        (void)pi;
        return static_cast<bool>(a.arc_in[arc]);
    };

    int best = -1;
    double best_theta = 0.0;
    for (double theta : candidates) {
        int c = 0;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (member(all[i], i, theta)) ++c;
        if (c > best) {
            best = c;
            best_theta = theta;
        }
    }
    if (theta_out) *theta_out = best_theta;
    return best;
}

}  // namespace detail

/// Exact fixed-center oracle: enumerate every event angle independently per
/// (point, edge) pair, then evaluate count_at_rotation at every event angle
/// and every inter-event midpoint.
inline OracleReport oracle_fixed(const SimplePolygon& poly, Point2 r,
                                 const std::vector<Point2>& points,
                                 const Config& cfg) {
    std::vector<double> angles;
    for (const auto& p : points) {
        auto a = detail::all_event_angles(poly, r, p, cfg.eps_len);
        angles.insert(angles.end(), a.begin(), a.end());
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

    std::vector<double> candidates{0.0};
    for (std::size_t i = 0; i < angles.size(); ++i) {
        candidates.push_back(angles[i]);
        const double next =
            i + 1 < angles.size() ? angles[i + 1] : angles[0] + kTwoPi;
        candidates.push_back(wrap_angle(0.5 * (angles[i] + next)));
    }

    OracleReport rep;
    rep.method = "fixed-event-enumeration";
    rep.best_count = -1;
    std::vector<int> counts(candidates.size());
    parallel_for(candidates.size(), cfg.parallel, [&](std::size_t i) {
        counts[i] = count_at_rotation(poly, r, points, candidates[i], cfg);
    });
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (counts[i] > rep.best_count) {
            rep.best_count = counts[i];
            rep.witness_theta = candidates[i];
        }
    }
    rep.candidates = static_cast<long>(candidates.size());
    return rep;
}

/// Grid lower bound for the segment-restricted problem: exact fixed-center
/// optimum at G uniform centers a + (i/G)(b - a), i = 0..G-1. Nested grids
/// (G, 2G, 4G, ...) are supersets, so refinement is monotone.
inline OracleReport oracle_segment(const SimplePolygon& poly,
                                   const std::vector<Point2>& points, Point2 a,
                                   Point2 b, int grid, const Config& cfg) {
    OracleReport rep;
    rep.method = "segment-grid";
    rep.best_count = -1;
    const int g = std::max(1, grid);
    std::vector<int> counts(static_cast<std::size_t>(g));
    std::vector<double> thetas(static_cast<std::size_t>(g));
    parallel_for(static_cast<std::size_t>(g), cfg.parallel, [&](std::size_t i) {
        const Point2 c = a + (static_cast<double>(i) / g) * (b - a);
        counts[i] = detail::exact_count_at_center(poly, c, points, cfg, &thetas[i]);
    });
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > rep.best_count) {
            rep.best_count = counts[i];
            rep.witness_theta = thetas[i];
            rep.witness_center = a + (static_cast<double>(i) / g) * (b - a);
        }
    }
    rep.candidates = g;
    return rep;
}

/// Sampling oracle for the 3D problem: Fibonacci-sphere directions, depth
/// counted by direct containment of the rotated points.
inline OracleReport oracle_3d(const TriMeshPolyhedron& mesh, Point3 r,
                              const std::vector<Point3>& points, long samples,
                              const Config& cfg) {
    OracleReport rep;
    rep.method = "fibonacci-direction-sampling";
    rep.best_count = -1;
    const long n = std::max(1L, samples);
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));

    auto depth_at = [&](double theta, double phi) {
        // R = Rz(theta) * Ry(pi/2 - phi), written out directly.
        const double cp = std::cos(kPi / 2.0 - phi), sp = std::sin(kPi / 2.0 - phi);
        const double ct = std::cos(theta), st = std::sin(theta);
        const double m[3][3] = {
            {ct * cp, -st, ct * sp},
            {st * cp, ct, st * sp},
            {-sp, 0.0, cp},
        };
        int c = 0;
        for (const auto& p : points) {
            const Point3 d = p - r;
            const Point3 q{
                r.x + m[0][0] * d.x + m[0][1] * d.y + m[0][2] * d.z,
                r.y + m[1][0] * d.x + m[1][1] * d.y + m[1][2] * d.z,
                r.z + m[2][0] * d.x + m[2][1] * d.y + m[2][2] * d.z};
            if (point_in_polyhedron(mesh, q, cfg.eps_len) != Containment::Outside)
                ++c;
        }
        return c;
    };

    std::vector<int> depths(static_cast<std::size_t>(n));
    std::vector<double> th(static_cast<std::size_t>(n)), ph(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), cfg.parallel, [&](std::size_t i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / n;
        ph[i] = std::asin(std::clamp(z, -1.0, 1.0));
        th[i] = wrap_angle(golden_angle * static_cast<double>(i));
        depths[i] = depth_at(th[i], ph[i]);
    });
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (depths[i] > rep.best_count) {
            rep.best_count = depths[i];
            rep.witness_theta = th[i];
            rep.witness_phi = ph[i];
        }
    }
    rep.candidates = n;
    return rep;
}

/// 1D decision for Segments Containing Points: is there a shift u with
/// A + u inside B? Candidate shifts place some point exactly on an interval
/// endpoint; the minimum valid shift always does, so the candidate set is
/// complete.
inline bool scp_has_shift(const std::vector<double>& a_vals,
                          std::vector<std::pair<double, double>> b_ivs,
                          double eps = 0.0) {
    if (a_vals.empty()) return true;
    std::sort(b_ivs.begin(), b_ivs.end());
    auto covered = [&](double x) {
        for (const auto& iv : b_ivs)
            if (x >= iv.first - eps && x <= iv.second + eps) return true;
        return false;
    };
    for (const auto& iv : b_ivs) {
        for (double endpoint : {iv.first, iv.second}) {
            for (double a : a_vals) {
                const double u = endpoint - a;
                bool all = true;
                for (double q : a_vals)
                    if (!covered(q + u)) {
                        all = false;
                        break;
                    }
                if (all) return true;
            }
        }
    }
    return false;
}

}  // namespace mcr::oracle
