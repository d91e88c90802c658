#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "mcr/errors.hpp"
#include "mcr/fixed.hpp"
#include "mcr/io.hpp"
#include "mcr/oracle.hpp"
#include "mcr/segment.hpp"

// SVG 1.1 emission for the three figure modes. Output is deterministic for
// fixed inputs: fixed viewport, fixed formatting, no timestamps.

namespace mcr::svg {

namespace detail {

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct Viewport {
    double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
    double width = 800, height = 800;

    void include(Point2 p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    void pad(double frac) {
        const double dx = (max_x - min_x) * frac + 1e-9;
        const double dy = (max_y - min_y) * frac + 1e-9;
        min_x -= dx; max_x += dx;
        min_y -= dy; max_y += dy;
    }
    Point2 map(Point2 p) const {
        const double sx = width / (max_x - min_x);
        const double sy = height / (max_y - min_y);
        const double s = std::min(sx, sy);
        return {(p.x - min_x) * s, height - (p.y - min_y) * s};
    }
    double scale() const {
        return std::min(width / (max_x - min_x), height / (max_y - min_y));
    }
};

inline std::string header(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
           "width=\"" + num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " +
           num(w) + " " + num(h) + "\">\n";
}

}  // namespace detail

/// Per-point interval timeline plus the exact depth staircase. The depth
/// profile is a polyline with class "depth-profile" whose y-steps encode
/// the coverage count, so tests can re-parse it.
inline std::string render_events_from_sets(
    const std::vector<AngularIntervalSet>& sets) {
    const double W = 800, H = 400;
    const double row_h = 18.0;
    const double axis_y0 = 40.0;
    auto x_of = [&](double angle) { return 40.0 + (W - 80.0) * angle / kTwoPi; };

    std::string out = detail::header(W, H);
    out += "<rect x=\"0\" y=\"0\" width=\"" + detail::num(W) + "\" height=\"" +
           detail::num(H) + "\" fill=\"white\"/>\n";

    // Interval rows.
    std::vector<double> endpoints;
    int full_count = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const double y = axis_y0 + row_h * static_cast<double>(i);
        auto draw_bar = [&](double a, double b) {
            out += "<rect class=\"interval\" x=\"" + detail::num(x_of(a)) +
                   "\" y=\"" + detail::num(y) + "\" width=\"" +
                   detail::num(std::max(1.0, x_of(b) - x_of(a))) +
                   "\" height=\"" + detail::num(row_h * 0.6) +
                   "\" fill=\"#4878a8\"/>\n";
        };
        if (sets[i].full_circle) {
            draw_bar(0.0, kTwoPi);
            ++full_count;
            continue;
        }
        for (const auto& iv : sets[i].intervals) {
            if (iv.start <= iv.end) {
                draw_bar(iv.start, iv.end);
            } else {
                draw_bar(iv.start, kTwoPi);
                draw_bar(0.0, iv.end);
            }
            endpoints.push_back(iv.start);
            endpoints.push_back(iv.end);
        }
    }

    // Exact depth staircase over [0, 2*pi).
    std::sort(endpoints.begin(), endpoints.end());
    endpoints.erase(std::unique(endpoints.begin(), endpoints.end()),
                    endpoints.end());
    const double y_base = H - 40.0;
    const double y_unit = 24.0;
    std::string pts_attr;
    auto depth_at = [&](double angle) {
        int d = full_count;
        for (const auto& s : sets) {
            if (s.full_circle) continue;
            if (s.contains(angle, 0.0)) ++d;
        }
        return d;
    };
    std::vector<double> walls{0.0};
    walls.insert(walls.end(), endpoints.begin(), endpoints.end());
    walls.push_back(kTwoPi);
    std::sort(walls.begin(), walls.end());
    walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
    for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
        const double mid = 0.5 * (walls[i] + walls[i + 1]);
        const int d = depth_at(mid);
        const double y = y_base - y_unit * d;
        pts_attr += detail::num(x_of(walls[i])) + "," + detail::num(y) + " ";
        pts_attr += detail::num(x_of(walls[i + 1])) + "," + detail::num(y) + " ";
    }
    out += "<polyline class=\"depth-profile\" fill=\"none\" stroke=\"#c04040\" "
           "stroke-width=\"2\" points=\"" + pts_attr + "\"/>\n";
    out += "</svg>\n";
    return out;
}

/// Scene: polygon, rotation center, orbit circles, and the point set drawn
/// at the witness rotation (class pt-in / pt-out by containment).
inline std::string render_scene(const io::Instance& inst,
                                const io::ResultFile& res) {
    if (inst.kind != io::InstanceKind::Fixed2D &&
        inst.kind != io::InstanceKind::Segment2D &&
        inst.kind != io::InstanceKind::Chain2D)
        throw IncompatibleMode("scene mode requires a 2d instance");
    const Config cfg = inst.config();

    Point2 center = inst.center2;
    double theta = 0.0;
    if (inst.kind == io::InstanceKind::Fixed2D) {
        theta = res.witness.value("theta", 0.0);
    } else {
        theta = res.witness.value("omega", 0.0);
        if (res.witness.contains("center"))
            center = {res.witness["center"][0].get<double>(),
                      res.witness["center"][1].get<double>()};
    }

    detail::Viewport vp;
    vp.min_x = vp.max_x = center.x;
    vp.min_y = vp.max_y = center.y;
    for (const auto& ring : inst.polygon.rings)
        for (const auto& v : ring) vp.include(v);
    for (const auto& p : inst.points2) {
        vp.include(p);
        const double rad = dist(p, center);
        vp.include(center + Point2{rad, rad});
        vp.include(center - Point2{rad, rad});
    }
    vp.pad(0.05);

    std::string out = detail::header(vp.width, vp.height);
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";

    for (const auto& ring : inst.polygon.rings) {
        std::string d = "M";
        for (const auto& v : ring) {
            const Point2 m = vp.map(v);
            d += " " + detail::num(m.x) + " " + detail::num(m.y);
        }
        d += " Z";
        out += "<path class=\"polygon\" d=\"" + d +
               "\" fill=\"#e8eef8\" fill-rule=\"evenodd\" stroke=\"#203050\" "
               "stroke-width=\"1.5\"/>\n";
    }

    const Point2 cm = vp.map(center);
    out += "<circle class=\"center\" cx=\"" + detail::num(cm.x) + "\" cy=\"" +
           detail::num(cm.y) + "\" r=\"4\" fill=\"#000000\"/>\n";

    for (const auto& p : inst.points2) {
        const double rad = dist(p, center) * vp.scale();
        out += "<circle class=\"orbit\" cx=\"" + detail::num(cm.x) + "\" cy=\"" +
               detail::num(cm.y) + "\" r=\"" + detail::num(rad) +
               "\" fill=\"none\" stroke=\"#b0b8c8\" stroke-width=\"0.7\" "
               "stroke-dasharray=\"4 3\"/>\n";
    }
    for (const auto& p : inst.points2) {
        const Point2 rotated = rotate_about(p, center, theta);
        const bool in = point_in_polygon(inst.polygon, rotated, cfg.eps_len) !=
                        Containment::Outside;
        const Point2 m = vp.map(rotated);
        out += std::string("<circle class=\"") + (in ? "pt-in" : "pt-out") +
               "\" cx=\"" + detail::num(m.x) + "\" cy=\"" + detail::num(m.y) +
               "\" r=\"4\" fill=\"" + (in ? "#208040" : "#c04040") + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Events mode on a fixed2d instance: recompute the per-point interval
/// sets and draw the timeline.
inline std::string render_events(const io::Instance& inst) {
    if (inst.kind != io::InstanceKind::Fixed2D)
        throw IncompatibleMode("events mode requires a fixed2d instance");
    const Config cfg = inst.config();
    std::vector<AngularIntervalSet> sets(inst.points2.size());
    for (std::size_t i = 0; i < inst.points2.size(); ++i)
        sets[i] = point_rotation_intervals(inst.polygon, inst.center2,
                                           inst.points2[i], cfg, i);
    return render_events_from_sets(sets);
}

/// Curves mode on a segment2d instance: one polyline per omega curve in
/// the (x, omega) plane, vertical lines at the critical x values, and the
/// optimum marked.
inline std::string render_curves(const io::Instance& inst,
                                 const io::ResultFile& res) {
    if (inst.kind != io::InstanceKind::Segment2D)
        throw IncompatibleMode("curves mode requires a segment2d instance");
    const Config cfg = inst.config();
    const auto frame =
        canonicalize_frame(inst.segment.u, inst.segment.v, cfg.eps_len);
    const auto canon = transform_polygon(inst.polygon, frame);
    const auto axis_split = split_edges_at_x_axis(canon, cfg.eps_len);
    std::vector<Point2> pts(inst.points2.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        pts[i] = frame.to_canonical(inst.points2[i]);
    const auto curves = build_all_curves(axis_split, pts, frame.b_x, cfg);
    const auto criticals = critical_x_values(curves, frame.b_x, cfg);

    const double W = 800, H = 500;
    auto x_of = [&](double x) { return 50.0 + (W - 100.0) * x / frame.b_x; };
    auto y_of = [&](double w) { return H - 40.0 - (H - 80.0) * w / kTwoPi; };

    std::string out = detail::header(W, H);
    out += "<rect x=\"0\" y=\"0\" width=\"" + detail::num(W) + "\" height=\"" +
           detail::num(H) + "\" fill=\"white\"/>\n";
    for (double cx : criticals)
        out += "<line class=\"critical-x\" x1=\"" + detail::num(x_of(cx)) +
               "\" y1=\"" + detail::num(y_of(0.0)) + "\" x2=\"" +
               detail::num(x_of(cx)) + "\" y2=\"" + detail::num(y_of(kTwoPi)) +
               "\" stroke=\"#d0d0d0\" stroke-width=\"0.6\"/>\n";
    for (const auto& c : curves) {
        std::string pts_attr;
        const int samples = 128;
        for (int s = 0; s <= samples; ++s) {
            const double x =
                c.x_lo + (c.x_hi - c.x_lo) * static_cast<double>(s) / samples;
            const auto w = eval_omega_curve(c, x);
            if (!w) continue;
            pts_attr += detail::num(x_of(x)) + "," + detail::num(y_of(*w)) + " ";
        }
        out += "<polyline class=\"omega-curve\" fill=\"none\" "
               "stroke=\"#4878a8\" stroke-width=\"1.2\" points=\"" +
               pts_attr + "\"/>\n";
    }
    if (res.witness.contains("x") && res.witness.contains("omega")) {
        const double x = res.witness["x"].get<double>();
        const double w = res.witness["omega"].get<double>();
        out += "<circle class=\"optimum\" cx=\"" + detail::num(x_of(x)) +
               "\" cy=\"" + detail::num(y_of(w)) +
               "\" r=\"5\" fill=\"#c04040\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Mode dispatcher used by the CLI.
inline std::string render(const io::Instance& inst, const io::ResultFile& res,
                          const std::string& mode) {
    if (mode == "scene") return render_scene(inst, res);
    if (mode == "events") return render_events(inst);
    if (mode == "curves") return render_curves(inst, res);
    throw IncompatibleMode("unknown render mode \"" + mode + "\"");
}

}  // namespace mcr::svg
