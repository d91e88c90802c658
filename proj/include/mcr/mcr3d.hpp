#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mcr/angular.hpp"
#include "mcr/config.hpp"
#include "mcr/errors.hpp"
#include "mcr/geom3.hpp"
#include "mcr/util.hpp"

namespace mcr {

struct Rotation3 {
    std::array<std::array<double, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    double theta = 0.0;  // generating azimuth, when applicable
    double phi = kPi / 2.0;

    Point3 apply(Point3 v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

inline Point3 direction_of(double theta, double phi) {
    return {std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta),
            std::sin(phi)};
}

/// R(theta, phi) = Rz(theta) * Ry(pi/2 - phi); maps the z-axis to the
/// direction with azimuth theta and altitude phi. At phi = +-pi/2 every
/// theta gives the same direction (gimbal degeneracy; theta = 0 canonical).
inline Rotation3 rotation_from_direction(double theta, double phi) {
    const double psi = kPi / 2.0 - phi;
    const double cp = std::cos(psi), sp = std::sin(psi);
    const double ct = std::cos(theta), st = std::sin(theta);
    Rotation3 r;
    r.theta = theta;
    r.phi = phi;
    r.m = {{{ct * cp, -st, ct * sp},
            {st * cp, ct, st * sp},
            {-sp, 0.0, cp}}};
    return r;
}

/// Minimal-angle rotation taking the direction of (p - r) to the unit
/// vector n; the antipodal case rotates by pi about a deterministic
/// perpendicular axis (built from the lowest-index coordinate axis not
/// parallel to n).
inline Rotation3 normalization_rotation(Point3 p, Point3 r, Point3 n,
                                        double eps_len) {
    const Point3 diff = p - r;
    if (norm(diff) <= eps_len)
        throw PointAtCenter("normalization_rotation: p == r");
    const Point3 d = normalized(diff);
    const double c = std::clamp(dot(d, n), -1.0, 1.0);

    Point3 axis;
    double angle;
    if (c >= 1.0 - 1e-15) {
        Rotation3 ident;
        return ident;
    }
    if (c <= -1.0 + 1e-15) {
        Point3 pick{1.0, 0.0, 0.0};
        if (std::abs(dot(pick, n)) > 0.9) pick = {0.0, 1.0, 0.0};
        axis = normalized(pick - dot(pick, n) * n);
        angle = kPi;
    } else {
        axis = normalized(cross(d, n));
        angle = std::acos(c);
    }
    // Rodrigues.
    const double ca = std::cos(angle), sa = std::sin(angle);
    const double x = axis.x, y = axis.y, z = axis.z;
    Rotation3 rot;
    rot.m = {{{ca + x * x * (1 - ca), x * y * (1 - ca) - z * sa,
               x * z * (1 - ca) + y * sa},
              {y * x * (1 - ca) + z * sa, ca + y * y * (1 - ca),
               y * z * (1 - ca) - x * sa},
              {z * x * (1 - ca) - y * sa, z * y * (1 - ca) + x * sa,
               ca + z * z * (1 - ca)}}};
    return rot;
}

/// Stereographic projection from the pole n (unit) to the tangent plane at
/// -n, in a deterministic orthonormal 2D frame of that plane.
inline Point2 stereographic_project(Point3 q, Point3 n, double eps_ang) {
    const double c = dot(q, n);
    if (c >= 1.0 - 0.5 * eps_ang * eps_ang)
        throw PoleProjection("stereographic_project: q at the pole");
    const double t = 2.0 / (1.0 - c);
    const Point3 x = n + t * (q - n);  // lies on the plane x . n = -1
    const auto [e1, e2] = plane_frame(n);
    const Point3 rel = x + n;  // from the tangent point -n
    return {dot(rel, e1), dot(rel, e2)};
}

// ---------------------------------------------------------------------------
// Inclusion regions on the orbit sphere.

/// Arcs of the sphere/facet-plane circle lying inside the facet triangle.
/// The whole circle comes back as a single arc of extent 2*pi.
inline std::vector<Arc3> sphere_facet_arcs(const TriMeshPolyhedron& mesh,
                                           std::size_t facet, Point3 center,
                                           double radius, const Config& cfg) {
    std::vector<Arc3> out;
    const auto tri = mesh.facet_points(facet);
    Plane3 pl;
    try {
        pl = plane_through(tri[0], tri[1], tri[2]);
    } catch (const DegenerateRay&) {
        return out;
    }
    const auto res = sphere_plane_intersection(center, radius, pl, cfg.eps_len);
    if (res.kind != SpherePlaneResult::Circle) {
        if (res.kind == SpherePlaneResult::TangentPoint &&
            point_in_triangle(res.point, tri[0], tri[1], tri[2], cfg.eps_len))
            out.push_back({{res.point, 0.0, pl.n}, 0.0, kTwoPi});
        return out;
    }
    const Circle3& circ = res.circle;
    const auto [e1, e2] = plane_frame(circ.normal);

    // Each triangle side clips the circle at <= 2 angular breakpoints.
    std::vector<double> breaks;
    for (int i = 0; i < 3; ++i) {
        const Point3 A = tri[i];
        const Point3 B = tri[(i + 1) % 3];
        const Point3 inward = cross(pl.n, B - A);  // in-plane inward normal
        // g(t) = inward . (c(t) - A) = g0 + ga cos t + gb sin t
        const double g0 = dot(inward, circ.center - A);
        const double ga = circ.radius * dot(inward, e1);
        const double gb = circ.radius * dot(inward, e2);
        const double amp = std::hypot(ga, gb);
        if (amp < 1e-300) continue;
        const double ratio = -g0 / amp;
        if (std::abs(ratio) > 1.0) continue;
        const double base = std::atan2(gb, ga);
        const double off = std::acos(std::clamp(ratio, -1.0, 1.0));
        breaks.push_back(wrap_angle(base + off));
        breaks.push_back(wrap_angle(base - off));
    }
    auto inside_tri = [&](double t) {
        const Point3 q = circ.center + circ.radius * (std::cos(t) * e1) +
                         circ.radius * (std::sin(t) * e2);
        return point_in_triangle(q, tri[0], tri[1], tri[2], cfg.eps_len);
    };
    if (breaks.empty()) {
        if (inside_tri(0.0)) out.push_back({circ, 0.0, kTwoPi});
        return out;
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [&](double a, double b) {
                                 return angles_equal(a, b, cfg.eps_ang);
                             }),
                 breaks.end());
    const std::size_t k = breaks.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double a = breaks[i];
        const double b = i + 1 < k ? breaks[i + 1] : breaks[0] + kTwoPi;
        if (b - a <= cfg.eps_ang) continue;
        if (inside_tri(wrap_angle(0.5 * (a + b)))) out.push_back({circ, a, b});
    }
    return out;
}

/// One point's inclusion region: the subset of its orbit sphere whose
/// rotations place the point inside the closed polyhedron. Bounded by
/// sphere/facet arcs; membership is direct containment of the rotated
/// point.
struct SphericalRegion {
    std::size_t point_index = 0;
    double orbit_radius = 0.0;
    std::vector<Arc3> boundary;
    std::vector<Point3> seeds;  // a few directions known to be inside
    bool whole_sphere = false;
    bool empty = false;
};

inline SphericalRegion inclusion_region(const TriMeshPolyhedron& mesh, Point3 r,
                                        Point3 p, const Config& cfg,
                                        std::size_t point_index = 0) {
    SphericalRegion region;
    region.point_index = point_index;
    region.orbit_radius = dist(p, r);
    if (region.orbit_radius <= cfg.eps_len) {
        if (point_in_polyhedron(mesh, r, cfg.eps_len) != Containment::Outside)
            region.whole_sphere = true;
        else
            region.empty = true;
        return region;
    }
    for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
        auto arcs = sphere_facet_arcs(mesh, f, r, region.orbit_radius, cfg);
        region.boundary.insert(region.boundary.end(), arcs.begin(), arcs.end());
    }
    // Fibonacci-scan a few interior seed directions.
    const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
    int found = 0;
    for (int i = 0; i < 256 && found < 8; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / 256.0;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double t = golden_angle * i;
        const Point3 dir{rad * std::cos(t), rad * std::sin(t), z};
        if (point_in_polyhedron(mesh, r + region.orbit_radius * dir,
                                cfg.eps_len) != Containment::Outside) {
            region.seeds.push_back(dir);
            ++found;
        }
    }
    if (region.boundary.empty()) {
        if (found > 0) region.whole_sphere = true;
        else region.empty = true;
    }
    return region;
}

inline bool region_contains_direction(const SphericalRegion& region,
                                      const TriMeshPolyhedron& mesh, Point3 r,
                                      Point3 dir, const Config& cfg) {
    if (region.whole_sphere) return true;
    if (region.empty) return false;
    return point_in_polyhedron(mesh, r + region.orbit_radius * normalized(dir),
                               cfg.eps_len) != Containment::Outside;
}

// ---------------------------------------------------------------------------
// Depth and the latitude-slab solver.

inline int depth_at_rotation(const TriMeshPolyhedron& mesh, Point3 r,
                             const std::vector<Point3>& points,
                             const Rotation3& rot, const Config& cfg) {
    int c = 0;
    for (const auto& p : points)
        if (point_in_polyhedron(mesh, r + rot.apply(p - r), cfg.eps_len) !=
            Containment::Outside)
            ++c;
    return c;
}

namespace detail3d {

/// u(phi) = Ry(pi/2 - phi) (p - r): the pre-azimuth image of the point.
inline Point3 pre_azimuth(Point3 d, double phi) {
    const double psi = kPi / 2.0 - phi;
    const double cp = std::cos(psi), sp = std::sin(psi);
    return {cp * d.x + sp * d.z, d.y, -sp * d.x + cp * d.z};
}

}  // namespace detail3d

/// Theta-intervals of one latitude slice: for fixed phi, the rotated copy
/// of each point traces a horizontal circle; facet-plane crossings have
/// closed-form theta roots, which are kept when they land inside the facet
/// triangle and stitched into intervals by midpoint containment.
inline std::vector<AngularIntervalSet> latitude_theta_intervals(
    const TriMeshPolyhedron& mesh, Point3 r, const std::vector<Point3>& points,
    double phi, const Config& cfg) {
    std::vector<AngularIntervalSet> sets(points.size());
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        const Point3 u = detail3d::pre_azimuth(points[pi] - r, phi);
        auto place = [&](double theta) -> Point3 {
            const double ct = std::cos(theta), st = std::sin(theta);
            return {r.x + ct * u.x - st * u.y, r.y + st * u.x + ct * u.y,
                    r.z + u.z};
        };
        std::vector<double> events;
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            const auto tri = mesh.facet_points(f);
            Plane3 pl;
            try {
                pl = plane_through(tri[0], tri[1], tri[2]);
            } catch (const DegenerateRay&) {
                continue;
            }
            // n . (r + Rz(theta) u) = c  =>  A cos + B sin = C.
            const double A = pl.n.x * u.x + pl.n.y * u.y;
            const double B = pl.n.y * u.x - pl.n.x * u.y;
            const double C = pl.c - dot(pl.n, r) - pl.n.z * u.z;
            const double amp = std::hypot(A, B);
            if (amp < 1e-300) continue;
            const double ratio = C / amp;
            if (std::abs(ratio) > 1.0 + 1e-12) continue;
            const double base = std::atan2(B, A);
            const double off = std::acos(std::clamp(ratio, -1.0, 1.0));
            for (double theta : {base + off, base - off}) {
                const Point3 hit = place(theta);
                if (point_in_triangle(hit, tri[0], tri[1], tri[2],
                                      10.0 * cfg.eps_len))
                    events.push_back(wrap_angle(theta));
            }
        }
        sets[pi] = stitch_intervals(
            std::move(events),
            [&](double theta) {
                return point_in_polyhedron(mesh, place(theta), cfg.eps_len) !=
                       Containment::Outside;
            },
            cfg.eps_ang, pi);
    }
    return sets;
}

struct Solution3D {
    double theta_star = 0.0;
    double phi_star = 0.0;
    int count = 0;
};

namespace detail3d {

/// phi values where u_z(phi) = k, i.e. -cos(phi) d.x + sin(phi) d.z = k.
inline void solve_uz(Point3 d, double k, std::vector<double>& out) {
    const double A = -d.x, B = d.z;
    const double amp = std::hypot(A, B);
    if (amp < 1e-300) return;
    const double ratio = k / amp;
    if (std::abs(ratio) > 1.0) return;
    const double base = std::atan2(B, A);
    const double off = std::acos(std::clamp(ratio, -1.0, 1.0));
    for (double phi : {base + off, base - off}) {
        const double w = std::remainder(phi, kTwoPi);
        if (w >= -kPi / 2.0 - 1e-12 && w <= kPi / 2.0 + 1e-12)
            out.push_back(std::clamp(w, -kPi / 2.0, kPi / 2.0));
    }
}

}  // namespace detail3d

/// Candidate phi values at which the theta-interval structure of some point
/// can change: latitude circle tangent to a facet plane, passing through
/// the supporting line of a facet edge, or reaching a vertex height; plus
/// the poles. All closed-form 1D solves.
inline std::vector<double> candidate_phis(const TriMeshPolyhedron& mesh,
                                          Point3 r,
                                          const std::vector<Point3>& points,
                                          const Config& cfg) {
    std::vector<double> phis{-kPi / 2.0, kPi / 2.0, 0.0};
    for (const auto& p : points) {
        const Point3 d = p - r;
        const double orbit2 = norm2(d);
        if (orbit2 <= cfg.eps_len * cfg.eps_len) continue;

        // Tangency to facet planes: |C(phi)| = |n_xy| * rho(phi), with
        // u_z = -cos(phi) d.x + sin(phi) d.z =: k and rho^2 = |d|^2 - k^2.
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            const auto tri = mesh.facet_points(f);
            Plane3 pl;
            try {
                pl = plane_through(tri[0], tri[1], tri[2]);
            } catch (const DegenerateRay&) {
                continue;
            }
            const double nxy2 = pl.n.x * pl.n.x + pl.n.y * pl.n.y;
            const double c0 = pl.c - dot(pl.n, r);
            // (c0 - n.z k)^2 = nxy2 (|d|^2 - k^2): quadratic in k.
            const double qa = pl.n.z * pl.n.z + nxy2;
            const double qb = -2.0 * c0 * pl.n.z;
            const double qc = c0 * c0 - nxy2 * orbit2;
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0 && qa > 0.0) {
                const double sq = std::sqrt(disc);
                detail3d::solve_uz(d, (-qb - sq) / (2.0 * qa), phis);
                detail3d::solve_uz(d, (-qb + sq) / (2.0 * qa), phis);
            }
        }
        // Vertex heights.
        for (const auto& vtx : mesh.vertices)
            detail3d::solve_uz(d, vtx.z - r.z, phis);
        // Facet edge lines: the orbit circle passes through the line when
        // the line's point at the orbit plane height lies at orbit radius.
        for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
            const auto tri = mesh.facet_points(f);
            for (int e = 0; e < 3; ++e) {
                const Point3 E0 = tri[e];
                const Point3 Ed = tri[(e + 1) % 3] - tri[e];
                if (std::abs(Ed.z) < 1e-12) continue;  // horizontal: tangency covers it
                // Height h above r: line point L(h) with L.z = r.z + h.
                // |L_xy - r_xy|^2 = |d|^2 - h^2, quadratic in h.
                const double ax = E0.x - r.x - (E0.z - r.z) * Ed.x / Ed.z;
                const double bx = Ed.x / Ed.z;
                const double ay = E0.y - r.y - (E0.z - r.z) * Ed.y / Ed.z;
                const double by = Ed.y / Ed.z;
                // (ax + bx h)^2 + (ay + by h)^2 = |d|^2 - h^2
                const double qa = bx * bx + by * by + 1.0;
                const double qb = 2.0 * (ax * bx + ay * by);
                const double qc = ax * ax + ay * ay - orbit2;
                const double disc = qb * qb - 4.0 * qa * qc;
                if (disc < 0.0) continue;
                const double sq = std::sqrt(disc);
                detail3d::solve_uz(d, (-qb - sq) / (2.0 * qa), phis);
                detail3d::solve_uz(d, (-qb + sq) / (2.0 * qa), phis);
            }
        }
    }
    std::sort(phis.begin(), phis.end());
    phis.erase(std::unique(phis.begin(), phis.end(),
                           [](double a, double b) { return b - a <= 1e-9; }),
               phis.end());
    return phis;
}

/// Latitude-slab solver for the 3D fixed-center problem: sweep the
/// closed-form theta events at every candidate phi and every slab midpoint,
/// then one adaptive bisection round around the best slab. The witness is
/// re-validated by a direct depth recount.
inline Solution3D solve_3d_fixed_mcr(const TriMeshPolyhedron& mesh, Point3 r,
                                     const std::vector<Point3>& points,
                                     const Config& cfg) {
    const auto phis = candidate_phis(mesh, r, points, cfg);
    std::vector<double> candidates;
    candidates.reserve(2 * phis.size());
    for (std::size_t i = 0; i < phis.size(); ++i) {
        candidates.push_back(phis[i]);
        if (i + 1 < phis.size())
            candidates.push_back(0.5 * (phis[i] + phis[i + 1]));
    }

    struct SliceBest {
        int count = -1;
        double theta = 0.0;
    };
    auto eval_slice = [&](double phi) {
        const auto sets = latitude_theta_intervals(mesh, r, points, phi, cfg);
        const auto sol = sweep_max_coverage(sets, cfg.eps_ang);
        SliceBest sb;
        sb.count = sol.best_count;
        sb.theta = sol.witness_angle;
        // Re-validate; scan the witness arcs if the representative fails.
        const auto rot = rotation_from_direction(sb.theta, phi);
        if (depth_at_rotation(mesh, r, points, rot, cfg) != sb.count) {
            bool fixed = false;
            for (const auto& iv : sol.witness_intervals) {
                for (double th : {iv.start, iv.midpoint(), iv.end}) {
                    if (depth_at_rotation(mesh, r, points,
                                          rotation_from_direction(th, phi),
                                          cfg) == sb.count) {
                        sb.theta = th;
                        fixed = true;
                        break;
                    }
                }
                if (fixed) break;
            }
            if (!fixed)
                sb.count = depth_at_rotation(
                    mesh, r, points, rotation_from_direction(sb.theta, phi), cfg);
        }
        return sb;
    };

    std::vector<SliceBest> evals(candidates.size());
    parallel_for(candidates.size(), cfg.parallel, [&](std::size_t i) {
        evals[i] = eval_slice(candidates[i]);
    });

    Solution3D best;
    best.count = -1;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (evals[i].count > best.count) {
            best.count = evals[i].count;
            best.theta_star = evals[i].theta;
            best.phi_star = candidates[i];
            best_idx = i;
        }
    }

    // One refinement round: bisect the best slab and its neighbors.
    std::vector<double> refine;
    for (std::size_t i = best_idx >= 2 ? best_idx - 2 : 0;
         i + 1 < candidates.size() && i <= best_idx + 1; ++i)
        refine.push_back(0.5 * (candidates[i] + candidates[i + 1]));
    for (double phi : refine) {
        const auto sb = eval_slice(phi);
        if (sb.count > best.count) {
            best.count = sb.count;
            best.theta_star = sb.theta;
            best.phi_star = phi;
        }
    }
    return best;
}

}  // namespace mcr
