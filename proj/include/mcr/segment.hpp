#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "mcr/angular.hpp"
#include "mcr/config.hpp"
#include "mcr/errors.hpp"
#include "mcr/fixed.hpp"
#include "mcr/geom.hpp"
#include "mcr/poly.hpp"
#include "mcr/util.hpp"

namespace mcr {

// ---------------------------------------------------------------------------
// Canonical frame: a at the origin, b on the positive x-axis.

struct CanonicalFrame {
    Point2 a;              // original position of a
    double c = 1.0;        // cos of the segment direction angle
    double s = 0.0;        // sin of the segment direction angle
    double b_x = 0.0;      // |ab|

    Point2 to_canonical(Point2 p) const {
        const Point2 d = p - a;
        return {c * d.x + s * d.y, -s * d.x + c * d.y};
    }
    Point2 from_canonical(Point2 q) const {
        return {a.x + c * q.x - s * q.y, a.y + s * q.x + c * q.y};
    }
};

inline CanonicalFrame canonicalize_frame(Point2 a, Point2 b, double eps_len) {
    const double len = dist(a, b);
    if (len <= eps_len)
        throw DegenerateSegment("canonicalize_frame: |ab| below tolerance");
    CanonicalFrame f;
    f.a = a;
    f.c = (b.x - a.x) / len;
    f.s = (b.y - a.y) / len;
    f.b_x = len;
    return f;
}

inline SimplePolygon transform_polygon(const SimplePolygon& poly,
                                       const CanonicalFrame& f) {
    SimplePolygon out;
    out.rings.reserve(poly.rings.size());
    for (const auto& ring : poly.rings) {
        std::vector<Point2> next;
        next.reserve(ring.size());
        for (const auto& v : ring) next.push_back(f.to_canonical(v));
        out.rings.push_back(std::move(next));
    }
    rebuild_edges(out);
    return out;
}

/// Split every edge strictly crossing y = 0 at its crossing; edges with an
/// endpoint on the axis stay whole.
inline SimplePolygon split_edges_at_x_axis(const SimplePolygon& poly,
                                           double eps_len) {
    SimplePolygon out;
    out.rings.reserve(poly.rings.size());
    for (const auto& ring : poly.rings) {
        std::vector<Point2> next;
        next.reserve(2 * ring.size());
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Point2 u = ring[i];
            const Point2 v = ring[(i + 1) % ring.size()];
            next.push_back(u);
            if ((u.y > eps_len && v.y < -eps_len) ||
                (u.y < -eps_len && v.y > eps_len)) {
                const double t = u.y / (u.y - v.y);
                next.push_back({u.x + t * (v.x - u.x), 0.0});
            }
        }
        out.rings.push_back(std::move(next));
    }
    rebuild_edges(out);
    return out;
}

// ---------------------------------------------------------------------------
// Per-point edge subdivision (two phases).

enum class Region { R1, R2, R3, R4 };

struct SubEdge {
    std::size_t parent_edge = 0;
    Point2 u, v;
    int sign_qy = +1;          // sign of q.y on the sub-edge (+1 on the axis)
    Region region = Region::R1;
    double x_lo = 1.0, x_hi = -1.0;  // feasible center range; empty if lo > hi
    bool tangent_left = false;       // endpoint is a Phase-1 tangency foot
    bool tangent_right = false;

    bool feasible() const { return x_lo <= x_hi; }
};

namespace detail {

/// Parameter interval of the edge inside the disk, if any.
inline bool seg_disk_interval(Point2 u, Point2 v, Point2 c, double R,
                              double* t0, double* t1) {
    const Point2 d = v - u;
    const Point2 m = u - c;
    const double A = norm2(d);
    if (A == 0.0) return false;
    const double B = 2.0 * dot(m, d);
    const double C = norm2(m) - R * R;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    *t0 = (-B - sq) / (2.0 * A);
    *t1 = (-B + sq) / (2.0 * A);
    return true;
}

/// x positions on the axis whose circle through p is tangent to the line
/// supporting the edge (intersections of the axis with the parabola
/// equidistant from p and the line).
inline std::vector<double> tangency_centers(Point2 u, Point2 v, Point2 p,
                                            double b_x) {
    std::vector<double> out;
    const double len = dist(u, v);
    if (len <= 0.0) return out;
    const Point2 dir = (1.0 / len) * (v - u);
    // Signed distance of (x, 0) from the line: c0 + c1 * x.
    const double c0 = dir.y * u.x - dir.x * u.y;
    const double c1 = -dir.y;
    // (x - p.x)^2 + p.y^2 = (c0 + c1 x)^2
    const double qa = 1.0 - c1 * c1;
    const double qb = -2.0 * p.x - 2.0 * c0 * c1;
    const double qc = p.x * p.x + p.y * p.y - c0 * c0;
    const double pad = 1e-12 * std::max(1.0, b_x);
    if (std::abs(qa) < 1e-14) {
        if (std::abs(qb) > 1e-300) {
            const double r = -qc / qb;
            if (r >= -pad && r <= b_x + pad) out.push_back(std::clamp(r, 0.0, b_x));
        }
        return out;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    for (double r : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)})
        if (r >= -pad && r <= b_x + pad) out.push_back(std::clamp(r, 0.0, b_x));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Foot (as edge parameter) of the perpendicular from c onto the edge line.
inline double foot_param(Point2 u, Point2 v, Point2 c) {
    const Point2 d = v - u;
    return dot(c - u, d) / norm2(d);
}

/// Connected components of the centers x whose circle through p meets the
/// segment uv. Transitions happen only where an endpoint radius matches or
/// at a tangency center, so midpoint probes between those breakpoints
/// classify whole spans.
inline std::vector<std::pair<double, double>> feasible_x_components(
    Point2 u, Point2 v, Point2 p, double b_x, const Config& cfg) {
    std::vector<double> brk{0.0, b_x};
    for (const Point2& endp : {u, v}) {
        const double den = 2.0 * (endp.x - p.x);
        if (std::abs(den) > 1e-14 * std::max(1.0, std::abs(endp.x))) {
            const double x = (norm2(endp) - norm2(p)) / den;
            if (x > 0.0 && x < b_x) brk.push_back(x);
        }
    }
    for (double x : tangency_centers(u, v, p, b_x))
        if (x > 0.0 && x < b_x) brk.push_back(x);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [&](double a, double b) {
                              return b - a <= 1e-12 * std::max(1.0, b_x);
                          }),
              brk.end());

    auto feasible_at = [&](double x) {
        const Point2 r{x, 0.0};
        const double radius = dist(p, r);
        if (radius <= cfg.eps_len) return false;
        return !circle_segment_intersection({r, radius}, {u, v}, cfg.eps_len)
                    .empty();
    };
    std::vector<std::pair<double, double>> components;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        if (!feasible_at(0.5 * (brk[i] + brk[i + 1]))) continue;
        if (!components.empty() && components.back().second == brk[i])
            components.back().second = brk[i + 1];
        else
            components.push_back({brk[i], brk[i + 1]});
    }
    return components;
}

}  // namespace detail

/// Phase 1 + Phase 2 subdivision for one point of S. Guarantees that every
/// circle centered on ab meets each sub-edge at most once and that the
/// rotation angle stays within one half-range per sub-edge. Each original
/// edge yields at most 5 sub-edges.
inline std::vector<SubEdge> subdivide_for_point(const SimplePolygon& poly,
                                                Point2 p, double b_x,
                                                const Config& cfg) {
    std::vector<SubEdge> out;
    const Point2 a{0.0, 0.0};
    const Point2 b{b_x, 0.0};
    const double ra = dist(p, a);
    const double rb = dist(p, b);
    const Point2 p_mirror{p.x, -p.y};
    const bool p_on_axis = std::abs(p.y) <= cfg.eps_len;
    // a' and b': a and b are the midpoints of p a' and p b'.
    const Point2 a_prime = 2.0 * Point2{0.0, 0.0} - p;
    const Point2 b_prime = 2.0 * b - p;

    for (std::size_t ei = 0; ei < poly.edge_list.size(); ++ei) {
        const Segment2& e = poly.edge_list[ei];
        if (point_segment_distance(p, e) <= cfg.eps_len)
            throw PointOnBoundary("subdivide_for_point: p lies on an edge");

        const Point2 u = e.u, v = e.v;
        const double elen = dist(u, v);
        auto in_lens = [&](Point2 q) {
            return dist(q, a) <= ra + cfg.eps_len && dist(q, b) <= rb + cfg.eps_len;
        };

        struct Cut {
            double t;
            bool tangency;
        };
        std::vector<Cut> phase1;
        std::vector<double> tangency_feet;  // params, incl. near-endpoint feet

        const bool touches_union =
            point_segment_distance(a, e) <= ra + cfg.eps_len ||
            point_segment_distance(b, e) <= rb + cfg.eps_len;
        if (touches_union && !in_lens(u) && !in_lens(v)) {
            // Does the edge cross the open interior of the lens?
            double ta0, ta1, tb0, tb1;
            bool lens_interior = false;
            double lo = 0.0, hi = 0.0;
            bool lo_on_a = false, hi_on_a = false;
            if (detail::seg_disk_interval(u, v, a, ra, &ta0, &ta1) &&
                detail::seg_disk_interval(u, v, b, rb, &tb0, &tb1)) {
                lo = std::max(ta0, tb0);
                hi = std::min(ta1, tb1);
                lo_on_a = ta0 >= tb0;
                hi_on_a = ta1 <= tb1;
                const double margin = cfg.eps_len / std::max(elen, cfg.eps_len);
                if (hi - lo > 2.0 * margin && hi > margin && lo < 1.0 - margin) {
                    const double tm = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
                    const Point2 mid = u + tm * (v - u);
                    lens_interior = dist(mid, a) < ra - cfg.eps_len &&
                                    dist(mid, b) < rb - cfg.eps_len;
                }
            }
            const double margin = cfg.eps_len / std::max(elen, cfg.eps_len);
            if (lens_interior) {
                // Crossing the lens: split at p p' if crossed, else at the
                // perpendicular foot of the circle whose boundary is hit
                // twice.
                bool split_done = false;
                if (!p_on_axis) {
                    // Proper crossing with the segment p p'.
                    const Point2 d = v - u;
                    const double denom = cross(d, p_mirror - p);
                    if (std::abs(denom) > 1e-300) {
                        const double t =
                            cross(p - u, p_mirror - p) / denom;
                        const double tau = cross(p - u, d) / denom;
                        if (t > margin && t < 1.0 - margin && tau >= -1e-12 &&
                            tau <= 1.0 + 1e-12) {
                            phase1.push_back({t, false});
                            split_done = true;
                        }
                    }
                }
                if (!split_done) {
                    const Point2 center = (lo_on_a && hi_on_a) ? a : b;
                    const double t = detail::foot_param(u, v, center);
                    if (t > margin && t < 1.0 - margin)
                        phase1.push_back({t, false});
                }
            } else {
                // Tangency subdivision.
                for (double x_c : detail::tangency_centers(u, v, p, b_x)) {
                    const double t = detail::foot_param(u, v, {x_c, 0.0});
                    if (t >= -margin && t <= 1.0 + margin) {
                        tangency_feet.push_back(std::clamp(t, 0.0, 1.0));
                        if (t > margin && t < 1.0 - margin)
                            phase1.push_back({t, true});
                    }
                }
            }
        }

        std::sort(phase1.begin(), phase1.end(),
                  [](const Cut& x, const Cut& y) { return x.t < y.t; });

        // Phase-1 pieces as parameter ranges of the original edge.
        struct Piece {
            double t0, t1;
        };
        std::vector<Piece> pieces;
        double prev = 0.0;
        for (const auto& cut : phase1) {
            pieces.push_back({prev, cut.t});
            prev = cut.t;
        }
        pieces.push_back({prev, 1.0});

        // Phase 2: split at the crossing with a'b' and, for doubly tangent
        // pieces, at the vertical line through p.
        std::vector<double> final_cuts;
        for (const auto& cut : phase1) final_cuts.push_back(cut.t);
        const double margin = cfg.eps_len / std::max(elen, cfg.eps_len);
        for (const auto& piece : pieces) {
            const Point2 P0 = u + piece.t0 * (v - u);
            const Point2 P1 = u + piece.t1 * (v - u);
            // a'b' crossing (horizontal segment at y = -p.y).
            const double y_ab = -p.y;
            if ((P0.y - y_ab > cfg.eps_len && P1.y - y_ab < -cfg.eps_len) ||
                (P0.y - y_ab < -cfg.eps_len && P1.y - y_ab > cfg.eps_len)) {
                const double s = (y_ab - P0.y) / (P1.y - P0.y);
                const double x_at = P0.x + s * (P1.x - P0.x);
                if (x_at >= a_prime.x - cfg.eps_len &&
                    x_at <= b_prime.x + cfg.eps_len) {
                    const double t = piece.t0 + s * (piece.t1 - piece.t0);
                    if (t > margin && t < 1.0 - margin) final_cuts.push_back(t);
                }
            }
            // Split where the piece crosses the vertical line through p.
            // Inside the union of circles that line is only reachable
            // through p p' (already cut), but a piece tangent to one family
            // circle can be hit from both sides of the vertical with a
            // disconnected center range; the cut keeps the angle range
            // single-signed on every sub-edge.
            if ((P0.x - p.x) * (P1.x - p.x) < 0.0) {
                const double s = (p.x - P0.x) / (P1.x - P0.x);
                const double t = piece.t0 + s * (piece.t1 - piece.t0);
                if (t > margin && t < 1.0 - margin) final_cuts.push_back(t);
            }
        }
        std::sort(final_cuts.begin(), final_cuts.end());
        final_cuts.erase(std::unique(final_cuts.begin(), final_cuts.end(),
                                     [&](double x, double y) {
                                         return y - x <= margin;
                                     }),
                         final_cuts.end());

        auto tangent_at = [&](double t) {
            for (double tf : tangency_feet)
                if (std::abs(tf - t) <= margin) return true;
            return false;
        };

        double t_prev = 0.0;
        for (std::size_t ci = 0; ci <= final_cuts.size(); ++ci) {
            const double t_next = ci < final_cuts.size() ? final_cuts[ci] : 1.0;
            if (t_next - t_prev <= margin && !(t_prev == 0.0 && t_next == 1.0)) {
                t_prev = t_next;
                continue;
            }
            SubEdge se;
            se.parent_edge = ei;
            se.u = u + t_prev * (v - u);
            se.v = u + t_next * (v - u);
            se.tangent_left = tangent_at(t_prev);
            se.tangent_right = tangent_at(t_next);
            const auto comps =
                detail::feasible_x_components(se.u, se.v, p, b_x, cfg);
            if (!comps.empty()) {
                se.x_lo = comps.front().first;
                se.x_hi = comps.back().second;
            }
            const Point2 mid = 0.5 * (se.u + se.v);
            se.sign_qy = mid.y > cfg.eps_len ? +1
                        : (mid.y < -cfg.eps_len ? -1 : +1);
            const bool left = mid.x <= p.x;
            const bool above = mid.y >= -p.y;
            se.region = left ? (above ? Region::R1 : Region::R3)
                             : (above ? Region::R2 : Region::R4);
            out.push_back(se);
            t_prev = t_next;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// The angle theta_s of the appendix and the omega read-off.

/// Angle in [0, pi) swept by the horizontal ray at r (rightward for points
/// in the upper set, leftward for the lower set) until it points at s.
/// Points on the axis belong to the upper set when right of r.
inline double theta_angle(Point2 s, Point2 r, double eps_len = 0.0) {
    const double d = dist(s, r);
    if (d <= eps_len) throw DegenerateRay("theta_angle: s == r");
    const bool upper = s.y > eps_len || (std::abs(s.y) <= eps_len && s.x > r.x);
    const double sgn = upper ? 1.0 : -1.0;
    const double c = (s.x - r.x) / d * sgn;
    const double sn = std::abs(s.y) / d;
    double th = std::atan2(sn, c);
    if (th >= kPi) th = 0.0;  // sin == 0 and cos == 1 wraps to zero
    return th;
}

/// Counterclockwise rotation about r carrying p onto q; p and q must lie on
/// a common circle around r.
inline double omega_from_positions(Point2 p, Point2 q, Point2 r,
                                   const Config& cfg) {
    const double dp = dist(p, r), dq = dist(q, r);
    if (dp <= cfg.eps_len || dq <= cfg.eps_len)
        throw DegenerateRay("omega_from_positions: point at center");
    if (std::abs(dp - dq) > 20.0 * cfg.eps_len + 1e-12 * dp)
        throw NotCocircular("omega_from_positions: radii differ");
    auto upper = [&](Point2 s) {
        return s.y > cfg.eps_len ||
               (std::abs(s.y) <= cfg.eps_len && s.x > r.x);
    };
    const double tp = theta_angle(p, r, cfg.eps_len);
    const double tq = theta_angle(q, r, cfg.eps_len);
    if (upper(p) == upper(q)) return wrap_angle(tq - tp);
    return wrap_angle(kPi + tq - tp);
}

// ---------------------------------------------------------------------------
// Omega curves: omega as an algebraic function of the center coordinate x.

enum class OmegaCase { SameHalfGE, SameHalfLT, OppositeHalf };

struct OmegaCurve {
    std::size_t point_index = 0;
    std::size_t sub_edge_index = 0;
    Point2 u, v, p;  // sub-edge and the moving point, canonical frame

    // lambda(x) = alpha(x) + branch * sqrt(beta(x)); q = u + lambda (v - u).
    Poly alpha;  // degree 1
    Poly beta;   // degree 2
    int branch = +1;

    // cos(omega) = (gamma(x) +- sqrt(delta(x))) / eps_poly(x).
    Poly gamma;     // degree 2
    Poly delta;     // degree 4
    Poly eps_poly;  // degree 2

    OmegaCase omega_case = OmegaCase::SameHalfGE;
    bool high_range = false;  // omega in [pi, 2*pi] instead of [0, pi]
    double x_lo = 0.0, x_hi = 0.0;
};

/// Evaluate the curve. Returns values in [0, pi] (or [pi, 2*pi] for
/// high-range curves; 2*pi is a legal value there), or nullopt outside the
/// x-domain.
inline std::optional<double> eval_omega_curve(const OmegaCurve& c, double x) {
    const double pad = 1e-12 * std::max(1.0, std::abs(c.x_hi));
    if (x < c.x_lo - pad || x > c.x_hi + pad) return std::nullopt;
    const double xx = std::clamp(x, c.x_lo, c.x_hi);
    const double beta_v = std::max(0.0, poly_eval(c.beta, xx));
    double lambda = poly_eval(c.alpha, xx) + c.branch * std::sqrt(beta_v);
    lambda = std::clamp(lambda, 0.0, 1.0);
    const Point2 q = c.u + lambda * (c.v - c.u);
    const double E = poly_eval(c.eps_poly, xx);
    if (E <= 0.0) return std::nullopt;
    const double cosw =
        std::clamp(((q.x - xx) * (c.p.x - xx) + q.y * c.p.y) / E, -1.0, 1.0);
    const double w = std::acos(cosw);
    return c.high_range ? kTwoPi - w : w;
}

namespace detail {

/// Direct geometric recomputation: intersect the circle with the sub-edge
/// and read the rotation angle off the positions.
inline std::optional<double> direct_omega(const SubEdge& se, Point2 p, double x,
                                          const Config& cfg) {
    const Point2 r{x, 0.0};
    const double radius = dist(p, r);
    if (radius <= cfg.eps_len) return std::nullopt;
    const auto hits =
        circle_segment_intersection({r, radius}, {se.u, se.v}, cfg.eps_len);
    if (hits.empty()) return std::nullopt;
    return omega_from_positions(p, hits[0].point, r, cfg);
}

}  // namespace detail

/// Build the omega curves of one sub-edge: one per connected component of
/// the feasible x-range (sub-edges reachable from both sides of the
/// vertical through p can have two components). Returns an empty vector
/// when no circle centered on ab ever meets the sub-edge.
inline std::vector<OmegaCurve> build_omega_curves(const SubEdge& se, Point2 p,
                                                  double b_x, const Config& cfg,
                                                  std::size_t point_index = 0,
                                                  std::size_t sub_edge_index = 0) {
    std::vector<OmegaCurve> out;
    const Point2 u = se.u, v = se.v;
    const double elen = dist(u, v);
    if (elen <= cfg.eps_len) return out;

    const auto components = detail::feasible_x_components(u, v, p, b_x, cfg);
    const Point2 d = v - u;
    const double A = norm2(d);
    for (const auto& [x_lo, x_hi] : components) {
        OmegaCurve c;
        c.point_index = point_index;
        c.sub_edge_index = sub_edge_index;
        c.u = u;
        c.v = v;
        c.p = p;
        c.x_lo = x_lo;
        c.x_hi = x_hi;

        // lambda^2 A + lambda B(x) + C(x) = 0 with B, C linear in x.
        // B(x) = -2 (d.x x - u.x d.x - u.y d.y), C(x) = -2 (u.x - p.x) x
        //        + |u|^2 - |p|^2.
        const Poly B{2.0 * (u.x * d.x + u.y * d.y), -2.0 * d.x};
        const Poly C{norm2(Point2{u.x, u.y}) - norm2(Point2{p.x, p.y}),
                     -2.0 * (u.x - p.x)};
        c.alpha = poly_scale(B, -1.0 / (2.0 * A));
        c.beta = poly_scale(poly_sub(poly_mul(B, B), poly_scale(poly_mul({1.0}, C), 4.0 * A)),
                            1.0 / (4.0 * A * A));

        // L1(x) = d.x (p.x - x) + d.y p.y, L0(x) = (u.x - x)(p.x - x)
        // + u.y p.y, E(x) = (p.x - x)^2 + p.y^2.
        const Poly L1{d.x * p.x + d.y * p.y, -d.x};
        const Poly L0{u.x * p.x + u.y * p.y, -(u.x + p.x), 1.0};
        c.eps_poly = {p.x * p.x + p.y * p.y, -2.0 * p.x, 1.0};
        c.gamma = poly_add(poly_mul(c.alpha, L1), L0);
        c.delta = poly_mul(poly_mul(L1, L1), c.beta);

        // Branch and half-range from a probe at the component midpoint.
        const double xm = 0.5 * (x_lo + x_hi);
        const Point2 r{xm, 0.0};
        const double radius = dist(p, r);
        const auto hits =
            circle_segment_intersection({r, radius}, {u, v}, cfg.eps_len);
        if (hits.empty()) continue;  // numeric sliver; drop the component
        const double lambda_direct = hits[0].t;
        const double alpha_m = poly_eval(c.alpha, xm);
        c.branch = lambda_direct >= alpha_m ? +1 : -1;

        const double w_direct = omega_from_positions(p, hits[0].point, r, cfg);
        c.high_range = w_direct > kPi;
        if (std::abs(w_direct - kPi) <= 1e-6) {
            // On the boundary between ranges: probe off-center to decide.
            const double x2 = x_lo + 0.25 * (x_hi - x_lo);
            if (auto w2 = detail::direct_omega(se, p, x2, cfg))
                c.high_range = *w2 > kPi;
        }

        auto upper = [&](Point2 s2, Point2 rr) {
            return s2.y > cfg.eps_len ||
                   (std::abs(s2.y) <= cfg.eps_len && s2.x > rr.x);
        };
        const bool same = upper(p, r) == upper(hits[0].point, r);
        if (!same)
            c.omega_case = OmegaCase::OppositeHalf;
        else
            c.omega_case = theta_angle(hits[0].point, r, cfg.eps_len) >=
                                   theta_angle(p, r, cfg.eps_len)
                               ? OmegaCase::SameHalfGE
                               : OmegaCase::SameHalfLT;
        out.push_back(c);
    }
    return out;
}

/// Spec-shaped convenience wrapper: the curve of a sub-edge with a single
/// feasible component (the common case), or nullopt when never hit.
inline std::optional<OmegaCurve> build_omega_curve(const SubEdge& se, Point2 p,
                                                   double b_x, const Config& cfg) {
    auto curves = build_omega_curves(se, p, b_x, cfg);
    if (curves.empty()) return std::nullopt;
    return curves.front();
}

// ---------------------------------------------------------------------------
// Curve pair intersections (Lemma 6 machinery).

/// Intersections of two omega curves over their common x-domain. Candidate
/// x values are the real roots of the degree-<=16 polynomial obtained by
/// squaring the curve equality twice; every candidate is then verified by
/// back-substitution, since squaring introduces spurious roots. Curves that
/// agree at more than 40 of 64 probes raise OverlappingCurves.
inline std::vector<std::pair<double, double>> curve_pair_intersections(
    const OmegaCurve& c1, const OmegaCurve& c2, const Config& cfg) {
    std::vector<std::pair<double, double>> out;
    const double lo = std::max(c1.x_lo, c2.x_lo);
    const double hi = std::min(c1.x_hi, c2.x_hi);
    if (lo > hi) return out;

    auto angular_agree = [&](double w1, double w2) {
        return std::abs(angle_diff(w1, w2)) <= cfg.tol_omega;
    };

    int agree = 0;
    for (int i = 0; i < 64; ++i) {
        const double x = lo + (hi - lo) * (i + 0.5) / 64.0;
        const auto w1 = eval_omega_curve(c1, x);
        const auto w2 = eval_omega_curve(c2, x);
        if (w1 && w2 && angular_agree(*w1, *w2)) ++agree;
    }
    if (agree > 40)
        throw OverlappingCurves("curve_pair_intersections: coincident branches");

    auto push_candidate = [&](double x) {
        const auto w1 = eval_omega_curve(c1, x);
        const auto w2 = eval_omega_curve(c2, x);
        if (w1 && w2 && angular_agree(*w1, *w2))
            out.push_back({x, 0.5 * (*w1 + *w2)});
    };

    if (hi - lo <= 1e-12 * std::max(1.0, hi)) {
        push_candidate(lo);
        return out;
    }

    // Shift and stretch to t in [-1, 1] for conditioning, then square away
    // both radicals:
    //   ((G1 E2 - G2 E1)^2 - E2^2 D1 - E1^2 D2)^2 = 4 E1^2 E2^2 D1 D2.
    const double xc = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    auto prep = [&](const Poly& poly) {
        return poly_stretch(poly_shift(poly, xc), h);
    };
    const Poly G1 = prep(c1.gamma), D1 = prep(c1.delta), E1 = prep(c1.eps_poly);
    const Poly G2 = prep(c2.gamma), D2 = prep(c2.delta), E2 = prep(c2.eps_poly);

    const Poly cross_term = poly_sub(poly_mul(G1, E2), poly_mul(G2, E1));
    const Poly E1sq = poly_mul(E1, E1);
    const Poly E2sq = poly_mul(E2, E2);
    const Poly Q = poly_sub(poly_sub(poly_mul(cross_term, cross_term),
                                     poly_mul(E2sq, D1)),
                            poly_mul(E1sq, D2));
    const Poly P16 = poly_sub(poly_mul(Q, Q),
                              poly_scale(poly_mul(poly_mul(E1sq, E2sq),
                                                  poly_mul(D1, D2)),
                                         4.0));

    const double t_tol = 1e-12 / std::max(h, 1e-12);
    for (double t : poly_roots_in(P16, -1.0, 1.0, std::min(t_tol, 1e-9)))
        push_candidate(xc + h * t);
    // Domain ends can carry boundary intersections missed by root noise.
    push_candidate(lo);
    push_candidate(hi);

    std::sort(out.begin(), out.end());
    const double x_dedupe = 1e-9 * std::max(1.0, hi);
    out.erase(std::unique(out.begin(), out.end(),
                          [&](const auto& A, const auto& B) {
                              return B.first - A.first <= x_dedupe;
                          }),
              out.end());
    if (out.size() > 32) out.resize(32);
    return out;
}

/// Slab boundaries of the x-omega arrangement: domain ends, curve endpoint
/// projections, and pairwise intersection/tangency x values.
inline std::vector<double> critical_x_values(const std::vector<OmegaCurve>& curves,
                                             double b_x, const Config& cfg) {
    std::vector<double> xs{0.0, b_x};
    for (const auto& c : curves) {
        xs.push_back(c.x_lo);
        xs.push_back(c.x_hi);
    }
    for (std::size_t i = 0; i < curves.size(); ++i) {
        for (std::size_t j = i + 1; j < curves.size(); ++j) {
            if (std::max(curves[i].x_lo, curves[j].x_lo) >
                std::min(curves[i].x_hi, curves[j].x_hi))
                continue;
            try {
                for (const auto& [x, w] :
                     curve_pair_intersections(curves[i], curves[j], cfg))
                    xs.push_back(x);
            } catch (const OverlappingCurves&) {
                xs.push_back(std::max(curves[i].x_lo, curves[j].x_lo));
                xs.push_back(std::min(curves[i].x_hi, curves[j].x_hi));
            }
        }
    }
    for (double& x : xs) x = std::clamp(x, 0.0, b_x);
    std::sort(xs.begin(), xs.end());
    const double eps_x = 1e-9 * std::max(b_x, 1e-300);
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [&](double a, double b) { return b - a <= eps_x; }),
             xs.end());
    return xs;
}

// ---------------------------------------------------------------------------
// The segment solver.

struct SegmentSolution {
    double x_star = 0.0;        // canonical-frame coordinate along ab
    Point2 center_star;         // original frame
    double omega_star = 0.0;
    int count = 0;
};

namespace detail {

struct SlabEval {
    int count = 0;
    double omega = 0.0;
};

/// Fixed-center sweep at center (x, 0) in the canonical frame; reports the
/// smallest rotation angle attaining the maximum (re-validated by direct
/// recount).
inline SlabEval evaluate_center(const SimplePolygon& poly,
                                const std::vector<Point2>& points, double x,
                                const Config& cfg) {
    const Point2 r{x, 0.0};
    std::vector<AngularIntervalSet> sets(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        sets[i] = point_rotation_intervals(poly, r, points[i], cfg, i);
    const auto sol = sweep_max_coverage(sets, cfg.eps_ang);

    auto recount = [&](double theta) {
        int c = 0;
        for (const auto& p : points)
            if (point_in_polygon(poly, rotate_about(p, r, theta), cfg.eps_len) !=
                Containment::Outside)
                ++c;
        return c;
    };

    std::vector<double> omega_candidates;
    for (const auto& iv : sol.witness_intervals) {
        if (iv.full_circle) {
            omega_candidates.push_back(0.0);
            continue;
        }
        if (iv.contains(0.0, 0.0)) omega_candidates.push_back(0.0);
        omega_candidates.push_back(iv.start);
        omega_candidates.push_back(iv.midpoint());
    }
    std::sort(omega_candidates.begin(), omega_candidates.end());
    SlabEval ev;
    ev.count = sol.best_count;
    ev.omega = sol.witness_angle;
    for (double w : omega_candidates) {
        if (recount(w) == sol.best_count) {
            ev.omega = w;
            return ev;
        }
    }
    // Fall back to the sweep's representative angle with its recount.
    ev.count = recount(sol.witness_angle);
    ev.omega = sol.witness_angle;
    return ev;
}

inline Point2 perturb_off_boundary(const SimplePolygon& poly, Point2 p,
                                   const Config& cfg) {
    Point2 q = p;
    double step = 4.0 * cfg.eps_len;
    for (int attempt = 0; attempt < 40; ++attempt) {
        bool clear = true;
        for (const auto& e : poly.edge_list)
            if (point_segment_distance(q, e) <= 2.0 * cfg.eps_len) clear = false;
        if (clear) return q;
        q = {p.x + step, p.y + step * 0.7548776662466927};
        step *= 2.0;
    }
    return q;
}

}  // namespace detail

/// Build every omega curve of the instance (canonical frame). Points lying
/// on the subdivided polygon boundary are perturbed by a few eps_len before
/// curve construction, as the subdivision assumes general position.
inline std::vector<OmegaCurve> build_all_curves(const SimplePolygon& axis_split,
                                                const std::vector<Point2>& points,
                                                double b_x, const Config& cfg) {
    std::vector<OmegaCurve> curves;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        Point2 p = points[pi];
        std::vector<SubEdge> subs;
        for (int attempt = 0; attempt < 3; ++attempt) {
            try {
                subs = subdivide_for_point(axis_split, p, b_x, cfg);
                break;
            } catch (const PointOnBoundary&) {
                log_info("segment solver: perturbing point %zu off the boundary",
                         pi);
                p = detail::perturb_off_boundary(axis_split, p, cfg);
            }
        }
        for (std::size_t si = 0; si < subs.size(); ++si) {
            auto cs = build_omega_curves(subs[si], p, b_x, cfg, pi, si);
            curves.insert(curves.end(), cs.begin(), cs.end());
        }
    }
    return curves;
}

/// Segment-restricted solver: vertical-slab decomposition of the x-omega
/// arrangement. Within a slab the interval structure in omega is
/// combinatorially constant, so the slab maximum is attained at its
/// midpoint; critical x values themselves are evaluated as well to honor
/// maxima that exist only on degenerate slabs. Ties resolve to the
/// lexicographically smallest (x, omega).
inline SegmentSolution solve_segment_mcr(const SimplePolygon& poly,
                                         const std::vector<Point2>& points,
                                         Point2 a, Point2 b, const Config& cfg) {
    if (dist(a, b) <= cfg.eps_len) {
        const auto sol = solve_fixed_baseline(poly, a, points, cfg);
        SegmentSolution out;
        out.x_star = 0.0;
        out.center_star = a;
        out.omega_star = sol.witness_angle;
        out.count = sol.best_count;
        return out;
    }

    const CanonicalFrame frame = canonicalize_frame(a, b, cfg.eps_len);
    const SimplePolygon canon = transform_polygon(poly, frame);
    const SimplePolygon axis_split = split_edges_at_x_axis(canon, cfg.eps_len);
    std::vector<Point2> pts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        pts[i] = frame.to_canonical(points[i]);

    const auto curves = build_all_curves(axis_split, pts, frame.b_x, cfg);
    const auto criticals = critical_x_values(curves, frame.b_x, cfg);

    std::vector<double> candidates;
    candidates.reserve(2 * criticals.size());
    for (std::size_t i = 0; i < criticals.size(); ++i) {
        candidates.push_back(criticals[i]);
        if (i + 1 < criticals.size())
            candidates.push_back(0.5 * (criticals[i] + criticals[i + 1]));
    }

    std::vector<detail::SlabEval> evals(candidates.size());
    parallel_for(candidates.size(), cfg.parallel, [&](std::size_t i) {
        evals[i] = detail::evaluate_center(axis_split, pts, candidates[i], cfg);
    });

    SegmentSolution best;
    best.count = -1;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (evals[i].count > best.count) {
            best.count = evals[i].count;
            best.x_star = candidates[i];
            best.omega_star = evals[i].omega;
        }
    }
    best.center_star = frame.from_canonical({best.x_star, 0.0});
    return best;
}

/// Best segment solution over a polygonal chain; ties break to the first
/// segment and then the smaller x.
inline SegmentSolution solve_chain_mcr(const SimplePolygon& poly,
                                       const std::vector<Point2>& points,
                                       const std::vector<Segment2>& chain,
                                       const Config& cfg) {
    if (chain.empty()) throw InvalidParams("solve_chain_mcr: empty chain");
    SegmentSolution best;
    best.count = -1;
    for (const auto& seg : chain) {
        const auto sol = solve_segment_mcr(poly, points, seg.u, seg.v, cfg);
        if (sol.count > best.count) best = sol;
    }
    return best;
}

}  // namespace mcr
