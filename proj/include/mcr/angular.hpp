#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "mcr/config.hpp"

namespace mcr {

/// Closed counterclockwise arc from start to end, both in [0, 2*pi).
/// start == end (with full_circle off) is a degenerate single angle; a
/// wrapping arc has start > end.
struct AngularInterval {
    double start = 0.0;
    double end = 0.0;
    bool full_circle = false;

    bool contains(double theta, double eps_ang = 0.0) const {
        if (full_circle) return true;
        const double t = wrap_angle(theta);
        if (start <= end) return t >= start - eps_ang && t <= end + eps_ang;
        return t >= start - eps_ang || t <= end + eps_ang;
    }

    bool degenerate(double eps_ang = 0.0) const {
        return !full_circle && std::abs(start - end) <= eps_ang;
    }

    /// Arc length in radians (2*pi for the full circle).
    double extent() const {
        if (full_circle) return kTwoPi;
        return start <= end ? end - start : kTwoPi - start + end;
    }

    double midpoint() const {
        if (full_circle) return 0.0;
        return wrap_angle(start + 0.5 * extent());
    }
};

/// Rotation angles placing one point of S inside the closed polygon, as
/// pairwise-disjoint closed arcs sorted by start.
struct AngularIntervalSet {
    std::size_t point_index = 0;
    std::vector<AngularInterval> intervals;
    bool full_circle = false;
    bool empty = false;

    bool contains(double theta, double eps_ang = 0.0) const {
        if (full_circle) return true;
        if (empty) return false;
        for (const auto& iv : intervals)
            if (iv.contains(theta, eps_ang)) return true;
        return false;
    }
};

struct CoverageSolution {
    int best_count = 0;
    std::vector<AngularInterval> witness_intervals;  // all maximal argmax arcs
    double witness_angle = 0.0;
};

/// Stitch a point's coverage of the circle from its event angles. The
/// events must contain every angle at which containment can change; the
/// classifier decides containment of the open arcs between consecutive
/// events (queried at arc midpoints). Event angles themselves count as
/// contained: they are boundary touches under closed containment, so an
/// event flanked by two outside arcs becomes a degenerate interval.
inline AngularIntervalSet stitch_intervals(
    std::vector<double> events, const std::function<bool(double)>& contained,
    double eps_ang, std::size_t point_index = 0) {
    AngularIntervalSet out;
    out.point_index = point_index;
    for (double& e : events) e = wrap_angle(e);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [&](double a, double b) {
                                 return angles_equal(a, b, eps_ang);
                             }),
                 events.end());
    if (events.size() >= 2 &&
        angles_equal(events.front() + kTwoPi, events.back(), eps_ang))
        events.pop_back();

    if (events.empty()) {
        if (contained(0.0)) out.full_circle = true;
        else out.empty = true;
        return out;
    }

    const std::size_t k = events.size();
    std::vector<bool> arc_inside(k);
    bool any_outside = false;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = events[i];
        const double b = i + 1 < k ? events[i + 1] : events[0] + kTwoPi;
        arc_inside[i] = contained(wrap_angle(0.5 * (a + b)));
        if (!arc_inside[i]) any_outside = true;
    }
    if (!any_outside) {
        out.full_circle = true;
        return out;
    }

    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t prev = (i + k - 1) % k;
        if (!arc_inside[i]) {
            if (!arc_inside[prev])  // isolated grazing touch
                out.intervals.push_back({events[i], events[i], false});
            continue;
        }
        if (arc_inside[prev]) continue;  // interior of a run
        std::size_t j = i;
        while (arc_inside[(j + 1) % k]) j = (j + 1) % k;
        out.intervals.push_back({events[i], events[(j + 1) % k], false});
    }
    if (out.intervals.empty()) out.empty = true;
    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const AngularInterval& a, const AngularInterval& b) {
                  return a.start < b.start;
              });
    return out;
}

/// Circular max-overlap sweep over closed interval sets. Event angles are
/// clustered within eps_ang so that boundary touches computed through
/// different floating-point routes still coincide; within a cluster,
/// in-events count before out-events (closed intervals). Returns the best
/// count together with every maximal argmax arc.
inline CoverageSolution sweep_max_coverage(
    const std::vector<AngularIntervalSet>& sets, double eps_ang = 1e-10) {
    CoverageSolution sol;
    int base = 0;
    std::vector<AngularInterval> ivs;
    for (const auto& s : sets) {
        if (s.full_circle) { ++base; continue; }
        if (s.empty) continue;
        for (const auto& iv : s.intervals) {
            if (iv.full_circle) ++base;
            else ivs.push_back(iv);
        }
    }

    // Cluster every endpoint angle within eps_ang and snap interval
    // endpoints to cluster indices; an endpoint belongs to the greatest
    // representative not above it (chain clustering).
    std::vector<double> raw;
    raw.reserve(2 * ivs.size());
    for (const auto& iv : ivs) {
        raw.push_back(iv.start);
        raw.push_back(iv.end);
    }
    std::sort(raw.begin(), raw.end());
    std::vector<double> reps;
    for (double a : raw)
        if (reps.empty() || a - reps.back() > eps_ang) reps.push_back(a);
    bool seam_merged = false;
    if (reps.size() >= 2 && reps.front() + kTwoPi - raw.back() <= eps_ang) {
        reps.pop_back();  // the top cluster wraps onto the first one
        seam_merged = true;
    }
    auto snap = [&](double a) -> std::size_t {
        auto it = std::upper_bound(reps.begin(), reps.end(), a);
        std::size_t idx =
            it == reps.begin() ? 0 : static_cast<std::size_t>(it - reps.begin()) - 1;
        if (seam_merged && idx + 1 == reps.size() && a - reps.back() > eps_ang)
            idx = 0;  // folded across the seam
        return idx;
    };

    const std::size_t k = reps.size();
    std::vector<int> nplus(k, 0), nminus(k, 0);
    int wrapping = 0;
    for (const auto& iv : ivs) {
        const std::size_t sc = snap(iv.start);
        const std::size_t ec = snap(iv.end);
        const bool wraps = iv.start > iv.end;
        if (wraps && sc == ec) {
            // The uncovered gap is below angular resolution.
            ++base;
            continue;
        }
        ++nplus[sc];
        ++nminus[ec];
        if (wraps) ++wrapping;
    }

    if (k == 0 || nplus == std::vector<int>(k, 0)) {
        sol.best_count = base;
        sol.witness_intervals.push_back({0.0, 0.0, true});
        sol.witness_angle = 0.0;
        return sol;
    }

    // Wrapping intervals are active on the seam arc before the walk begins;
    // their out-event precedes their in-event in cluster order, so the
    // accounting stays exact.
    const int seed = base + wrapping;
    int running = seed;
    std::vector<int> at_point(k), after(k);
    for (std::size_t i = 0; i < k; ++i) {
        at_point[i] = running + nplus[i];
        running += nplus[i] - nminus[i];
        after[i] = running;
    }

    int best = base;
    for (std::size_t i = 0; i < k; ++i)
        best = std::max({best, at_point[i], after[i]});
    sol.best_count = best;

    // Pieces alternate point(0), arc(0), ..., point(k-1), arc(k-1); the
    // last arc runs from reps[k-1] through the seam to reps[0]. A point
    // piece never scores below its adjacent arcs, so maximal argmax runs
    // start and end at point pieces.
    const std::size_t pieces = 2 * k;
    auto piece_value = [&](std::size_t piece) {
        return (piece % 2 == 0) ? at_point[piece / 2] : after[piece / 2];
    };
    bool all_best = true;
    for (std::size_t i = 0; i < pieces && all_best; ++i)
        if (piece_value(i) != best) all_best = false;
    if (all_best) {
        sol.witness_intervals.push_back({0.0, 0.0, true});
        sol.witness_angle = 0.0;
        return sol;
    }
    for (std::size_t i = 0; i < pieces; ++i) {
        if (piece_value(i) != best ||
            piece_value((i + pieces - 1) % pieces) == best)
            continue;
        std::size_t j = i;
        while (piece_value((j + 1) % pieces) == best) j = (j + 1) % pieces;
        const std::size_t first_pt = i;       // runs start at point pieces
        const std::size_t last_pt = j;        // and end at point pieces
        const double a = reps[(first_pt / 2) % k];
        const double b = reps[(last_pt / 2) % k];
        sol.witness_intervals.push_back({wrap_angle(a), wrap_angle(b), false});
    }
    std::sort(sol.witness_intervals.begin(), sol.witness_intervals.end(),
              [](const AngularInterval& a, const AngularInterval& b) {
                  return a.start < b.start;
              });

    // Representative angle: prefer a positive-length arc.
    sol.witness_angle = sol.witness_intervals.front().start;
    for (const auto& iv : sol.witness_intervals) {
        if (iv.extent() > 4.0 * eps_ang) {
            sol.witness_angle = iv.midpoint();
            break;
        }
    }
    return sol;
}

}  // namespace mcr
