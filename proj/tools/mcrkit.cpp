#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcr/fixed.hpp"
#include "mcr/generate.hpp"
#include "mcr/io.hpp"
#include "mcr/mcr3d.hpp"
#include "mcr/oracle.hpp"
#include "mcr/segment.hpp"
#include "mcr/svg.hpp"

using namespace mcr;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

struct CommonOpts {
    std::string instance_path;
    std::string out_path;
    std::string svg_path;
    std::optional<double> eps_len;
    std::optional<double> eps_ang;
    bool parallel = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--instance", opts.instance_path, "instance JSON file")
        ->required();
    cmd->add_option("--out", opts.out_path, "result JSON file");
    cmd->add_option("--svg", opts.svg_path, "also write a scene SVG");
    cmd->add_option("--eps-len", opts.eps_len, "override length tolerance");
    cmd->add_option("--eps-ang", opts.eps_ang, "override angle tolerance");
    cmd->add_flag("--parallel", opts.parallel, "enable internal parallel maps");
}

Config config_for(const io::Instance& inst, const CommonOpts& opts) {
    Config cfg = inst.config();
    if (opts.eps_len) cfg.eps_len = *opts.eps_len;
    if (opts.eps_ang) cfg.eps_ang = *opts.eps_ang;
    cfg.parallel = opts.parallel;
    return cfg;
}

io::Json interval_json(const std::vector<AngularInterval>& ivs) {
    io::Json j = io::Json::array();
    for (const auto& iv : ivs) {
        if (iv.full_circle) j.push_back("full");
        else j.push_back(io::Json::array({iv.start, iv.end}));
    }
    return j;
}

void write_outputs(const CommonOpts& opts, const io::Instance& inst,
                   const io::ResultFile& res) {
    if (!opts.out_path.empty()) io::save_result(opts.out_path, res);
    if (!opts.svg_path.empty()) {
        std::ofstream f(opts.svg_path);
        f << svg::render_scene(inst, res);
    }
    std::printf("%s: count=%d\n", res.solver.c_str(), res.count);
}

int run_solve_fixed(const CommonOpts& opts, const std::string& algo) {
    io::Instance inst = io::load_instance(opts.instance_path);
    io::ResultFile res;
    res.instance_kind = io::kind_name(inst.kind);

    SimplePolygon poly;
    Point2 center;
    std::vector<Point2> pts;
    double scp_scale = 0.0;
    if (inst.kind == io::InstanceKind::Fixed2D) {
        poly = inst.polygon;
        center = inst.center2;
        pts = inst.points2;
    } else if (inst.kind == io::InstanceKind::Scp) {
        const auto red = reduce_scp_to_mcr(inst.scp.a, inst.scp.b);
        poly = red.polygon;
        center = red.center;
        pts = red.points;
        scp_scale = red.scale;
    } else {
        throw SchemaError("solve fixed requires a fixed2d or scp instance");
    }
    Config cfg = inst.config();
    if (inst.kind == io::InstanceKind::Scp) cfg = make_config_2d(poly, pts);
    if (opts.eps_len) cfg.eps_len = *opts.eps_len;
    if (opts.eps_ang) cfg.eps_ang = *opts.eps_ang;
    cfg.parallel = opts.parallel;

    Timer timer;
    CoverageSolution sol;
    std::optional<long> k;
    if (algo == "sensitive") {
        auto sres = solve_fixed_output_sensitive(poly, center, pts, cfg);
        sol = sres.solution;
        k = sres.event_count;
        res.solver = "fixed-sensitive";
    } else {
        sol = solve_fixed_baseline(poly, center, pts, cfg);
        res.solver = "fixed-baseline";
    }
    res.wall_time_ms = timer.ms();
    res.count = sol.best_count;
    res.event_count = k;
    res.witness["theta"] = sol.witness_angle;
    res.witness["intervals"] = interval_json(sol.witness_intervals);
    if (inst.kind == io::InstanceKind::Scp && scp_scale > 0.0)
        res.witness["shift_u"] = sol.witness_angle / scp_scale;
    res.config_echo = io::config_echo(cfg);

    if (inst.kind == io::InstanceKind::Scp) {
        // Scene rendering works on the reduced geometry.
        io::Instance reduced;
        reduced.kind = io::InstanceKind::Fixed2D;
        reduced.polygon = poly;
        reduced.center2 = center;
        reduced.points2 = pts;
        write_outputs(opts, reduced, res);
    } else {
        write_outputs(opts, inst, res);
    }
    return 0;
}

int run_solve_segment(const CommonOpts& opts) {
    io::Instance inst = io::load_instance(opts.instance_path);
    if (inst.kind != io::InstanceKind::Segment2D)
        throw SchemaError("solve segment requires a segment2d instance");
    const Config cfg = config_for(inst, opts);
    Timer timer;
    const auto sol = solve_segment_mcr(inst.polygon, inst.points2,
                                       inst.segment.u, inst.segment.v, cfg);
    io::ResultFile res;
    res.solver = "segment-slab";
    res.instance_kind = io::kind_name(inst.kind);
    res.wall_time_ms = timer.ms();
    res.count = sol.count;
    res.witness["center"] = io::Json::array(
        {sol.center_star.x, sol.center_star.y});
    res.witness["x"] = sol.x_star;
    res.witness["omega"] = sol.omega_star;
    res.config_echo = io::config_echo(cfg);
    write_outputs(opts, inst, res);
    return 0;
}

int run_solve_chain(const CommonOpts& opts) {
    io::Instance inst = io::load_instance(opts.instance_path);
    if (inst.kind != io::InstanceKind::Chain2D)
        throw SchemaError("solve chain requires a chain2d instance");
    const Config cfg = config_for(inst, opts);
    std::vector<Segment2> chain;
    for (std::size_t i = 0; i + 1 < inst.chain.size(); ++i)
        chain.push_back({inst.chain[i], inst.chain[i + 1]});
    Timer timer;
    const auto sol = solve_chain_mcr(inst.polygon, inst.points2, chain, cfg);
    io::ResultFile res;
    res.solver = "chain-slab";
    res.instance_kind = io::kind_name(inst.kind);
    res.wall_time_ms = timer.ms();
    res.count = sol.count;
    res.witness["center"] = io::Json::array(
        {sol.center_star.x, sol.center_star.y});
    res.witness["x"] = sol.x_star;
    res.witness["omega"] = sol.omega_star;
    res.config_echo = io::config_echo(cfg);
    write_outputs(opts, inst, res);
    return 0;
}

int run_solve_3d(const CommonOpts& opts) {
    io::Instance inst = io::load_instance(opts.instance_path);
    if (inst.kind != io::InstanceKind::Fixed3D)
        throw SchemaError("solve 3d requires a fixed3d instance");
    const Config cfg = config_for(inst, opts);
    Timer timer;
    const auto sol = solve_3d_fixed_mcr(inst.mesh, inst.center3, inst.points3, cfg);
    io::ResultFile res;
    res.solver = "3d-latitude-slab";
    res.instance_kind = io::kind_name(inst.kind);
    res.wall_time_ms = timer.ms();
    res.count = sol.count;
    res.witness["theta"] = sol.theta_star;
    res.witness["phi"] = sol.phi_star;
    res.config_echo = io::config_echo(cfg);
    if (!opts.out_path.empty()) io::save_result(opts.out_path, res);
    std::printf("%s: count=%d\n", res.solver.c_str(), res.count);
    return 0;
}

int run_oracle(const CommonOpts& opts, const std::string& which, int grid,
               long samples) {
    io::Instance inst = io::load_instance(opts.instance_path);
    const Config cfg = config_for(inst, opts);
    oracle::OracleReport rep;
    io::ResultFile res;
    res.instance_kind = io::kind_name(inst.kind);
    Timer timer;
    if (which == "fixed") {
        if (inst.kind != io::InstanceKind::Fixed2D)
            throw SchemaError("oracle fixed requires a fixed2d instance");
        rep = oracle::oracle_fixed(inst.polygon, inst.center2, inst.points2, cfg);
        res.witness["theta"] = rep.witness_theta;
    } else if (which == "segment") {
        if (inst.kind != io::InstanceKind::Segment2D)
            throw SchemaError("oracle segment requires a segment2d instance");
        rep = oracle::oracle_segment(inst.polygon, inst.points2, inst.segment.u,
                                     inst.segment.v, grid, cfg);
        res.witness["center"] = io::Json::array(
            {rep.witness_center.x, rep.witness_center.y});
        res.witness["theta"] = rep.witness_theta;
    } else {
        if (inst.kind != io::InstanceKind::Fixed3D)
            throw SchemaError("oracle 3d requires a fixed3d instance");
        rep = oracle::oracle_3d(inst.mesh, inst.center3, inst.points3, samples, cfg);
        res.witness["theta"] = rep.witness_theta;
        res.witness["phi"] = rep.witness_phi;
    }
    res.solver = "oracle-" + rep.method;
    res.wall_time_ms = timer.ms();
    res.count = rep.best_count;
    res.witness["candidates"] = rep.candidates;
    res.config_echo = io::config_echo(cfg);
    if (!opts.out_path.empty()) io::save_result(opts.out_path, res);
    std::printf("%s: count=%d (candidates=%ld)\n", res.solver.c_str(), res.count,
                rep.candidates);
    return 0;
}

std::vector<Point2> parse_coords(const std::string& text, const char* what) {
    // "x,y;x,y;..." -> points
    std::vector<Point2> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t semi = text.find(';', pos);
        if (semi == std::string::npos) semi = text.size();
        const std::string pair = text.substr(pos, semi - pos);
        const std::size_t comma = pair.find(',');
        if (comma == std::string::npos)
            throw InvalidParams(std::string(what) + ": expected x,y;x,y;...");
        out.push_back({std::stod(pair.substr(0, comma)),
                       std::stod(pair.substr(comma + 1))});
        pos = semi + 1;
    }
    return out;
}

int run_gen(const std::string& kind, int teeth, int vertices, int count,
            double bbox, int size, int subdiv, int points, std::uint64_t seed,
            const std::string& out_path, const std::string& segment_text,
            const std::string& chain_text) {
    io::Instance inst;
    if (kind == "comb") {
        inst = gen::comb_instance(teeth, points, seed);
    } else if (kind == "star") {
        inst = gen::star_instance(vertices, points, seed);
    } else if (kind == "random-points") {
        inst = gen::random_points_instance(count, bbox, seed);
    } else if (kind == "scp") {
        inst = gen::scp_instance(size, seed);
    } else if (kind == "box3d") {
        inst = gen::box3d_instance(subdiv, points, seed);
    } else {
        throw InvalidParams("unknown generator kind \"" + kind + "\"");
    }
    if (!segment_text.empty()) {
        const auto seg = parse_coords(segment_text, "--segment");
        if (seg.size() != 2 || inst.kind != io::InstanceKind::Fixed2D)
            throw InvalidParams("--segment needs x,y;x,y on a 2d generator");
        inst.kind = io::InstanceKind::Segment2D;
        inst.segment = {seg[0], seg[1]};
    } else if (!chain_text.empty()) {
        const auto verts = parse_coords(chain_text, "--chain");
        if (verts.size() < 2 || inst.kind != io::InstanceKind::Fixed2D)
            throw InvalidParams("--chain needs at least two x,y vertices");
        inst.kind = io::InstanceKind::Chain2D;
        inst.chain = verts;
    }
    io::save_instance(out_path, inst);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int run_render(const std::string& instance_path, const std::string& result_path,
               const std::string& mode, const std::string& svg_path) {
    const io::Instance inst = io::load_instance(instance_path);
    io::ResultFile res;
    if (!result_path.empty()) res = io::load_result(result_path);
    const std::string doc = svg::render(inst, res, mode);
    std::ofstream f(svg_path);
    if (!f) throw SchemaError("cannot write SVG file: " + svg_path);
    f << doc;
    std::printf("wrote %s\n", svg_path.c_str());
    return 0;
}

int run_verify(const std::string& instance_path, const std::string& result_path) {
    const io::Instance inst = io::load_instance(instance_path);
    const io::ResultFile res = io::load_result(result_path);
    const Config cfg = inst.config();
    int recount = -1;
    if (res.instance_kind == "fixed2d") {
        recount = oracle::count_at_rotation(inst.polygon, inst.center2,
                                            inst.points2,
                                            res.witness.at("theta").get<double>(),
                                            cfg);
    } else if (res.instance_kind == "scp") {
        const auto red = reduce_scp_to_mcr(inst.scp.a, inst.scp.b);
        const Config rcfg = make_config_2d(red.polygon, red.points);
        recount = oracle::count_at_rotation(red.polygon, red.center, red.points,
                                            res.witness.at("theta").get<double>(),
                                            rcfg);
    } else if (res.instance_kind == "segment2d" ||
               res.instance_kind == "chain2d") {
        const Point2 center{res.witness.at("center")[0].get<double>(),
                            res.witness.at("center")[1].get<double>()};
        recount = oracle::count_at_rotation(inst.polygon, center, inst.points2,
                                            res.witness.at("omega").get<double>(),
                                            cfg);
    } else if (res.instance_kind == "fixed3d") {
        recount = depth_at_rotation(
            inst.mesh, inst.center3, inst.points3,
            rotation_from_direction(res.witness.at("theta").get<double>(),
                                    res.witness.at("phi").get<double>()),
            cfg);
    } else {
        throw SchemaError("verify: unknown instance kind in result");
    }
    if (recount != res.count) {
        std::fprintf(stderr, "verify: MISMATCH (stored %d, recount %d)\n",
                     res.count, recount);
        return 4;
    }
    std::printf("verify: OK (count=%d)\n", res.count);
    return 0;
}

int run_bench(const std::vector<int>& teeth_list, int points,
              const std::string& out_path) {
    std::printf("%8s %8s %8s %14s %15s %10s\n", "teeth", "m", "n",
                "baseline_ms", "sensitive_ms", "k");
    io::Json rows = io::Json::array();
    for (int t : teeth_list) {
        const auto inst = gen::comb_instance(t, points, 1);
        const Config cfg = inst.config();
        Timer tb;
        const auto base = solve_fixed_baseline(inst.polygon, inst.center2,
                                               inst.points2, cfg);
        const double ms_base = tb.ms();
        Timer ts;
        const auto sens = solve_fixed_output_sensitive(inst.polygon, inst.center2,
                                                       inst.points2, cfg);
        const double ms_sens = ts.ms();
        if (base.best_count != sens.solution.best_count)
            throw InternalError("bench: solver disagreement");
        const int m = static_cast<int>(inst.polygon.edge_list.size());
        std::printf("%8d %8d %8zu %14.3f %15.3f %10ld\n", t, m,
                    inst.points2.size(), ms_base, ms_sens, sens.event_count);
        io::Json row;
        row["teeth"] = t;
        row["m"] = m;
        row["n"] = inst.points2.size();
        row["baseline_ms"] = ms_base;
        row["sensitive_ms"] = ms_sens;
        row["k"] = sens.event_count;
        rows.push_back(row);
    }
    if (!out_path.empty()) io::save_json(out_path, rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mcrkit: maximum cover under rotation"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "run a solver");
    solve->require_subcommand(1);
    CommonOpts fixed_opts;
    std::string algo = "baseline";
    auto* solve_fixed = solve->add_subcommand("fixed", "fixed rotation center");
    add_common(solve_fixed, fixed_opts);
    solve_fixed->add_option("--algo", algo, "baseline|sensitive")
        ->check(CLI::IsMember({"baseline", "sensitive"}));
    CommonOpts seg_opts;
    auto* solve_seg = solve->add_subcommand("segment", "center on a segment");
    add_common(solve_seg, seg_opts);
    CommonOpts chain_opts;
    auto* solve_chain = solve->add_subcommand("chain", "center on a chain");
    add_common(solve_chain, chain_opts);
    CommonOpts opts3d;
    auto* solve3d = solve->add_subcommand("3d", "3d fixed center");
    add_common(solve3d, opts3d);

    // oracle
    auto* orc = app.add_subcommand("oracle", "brute-force verifiers");
    orc->require_subcommand(1);
    CommonOpts ofix_opts, oseg_opts, o3d_opts;
    auto* orc_fixed = orc->add_subcommand("fixed", "exact event enumeration");
    add_common(orc_fixed, ofix_opts);
    int grid = 64;
    auto* orc_seg = orc->add_subcommand("segment", "grid of fixed solves");
    add_common(orc_seg, oseg_opts);
    orc_seg->add_option("--grid", grid, "number of grid centers");
    long samples = 100000;
    auto* orc_3d = orc->add_subcommand("3d", "direction sampling");
    add_common(orc_3d, o3d_opts);
    orc_3d->add_option("--samples", samples, "number of sampled directions");

    // gen
    auto* g = app.add_subcommand("gen", "instance generators");
    g->require_subcommand(1);
    int teeth = 4, vertices = 12, count = 10, size = 6, subdiv = 1, points = 1;
    double bbox = 2.0;
    std::uint64_t seed = 1;
    std::string gen_out, segment_text, chain_text;
    std::string gen_kind;
    for (const char* kind :
         {"comb", "star", "random-points", "scp", "box3d"}) {
        auto* sub = g->add_subcommand(kind, "");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--out", gen_out, "output instance file")->required();
        if (std::string(kind) == "comb") {
            sub->add_option("--teeth", teeth, "number of teeth");
            sub->add_option("--points", points, "number of threaded points");
        } else if (std::string(kind) == "star") {
            sub->add_option("--vertices", vertices, "polygon vertices");
            sub->add_option("--points", points, "number of points");
        } else if (std::string(kind) == "random-points") {
            sub->add_option("--count", count, "number of points");
            sub->add_option("--bbox", bbox, "half extent of the box polygon");
        } else if (std::string(kind) == "scp") {
            sub->add_option("--size", size, "max |A| and |B|");
        } else {
            sub->add_option("--subdiv", subdiv, "face subdivisions");
            sub->add_option("--points", points, "number of points");
        }
        if (std::string(kind) == "comb" || std::string(kind) == "star" ||
            std::string(kind) == "random-points") {
            sub->add_option("--segment", segment_text,
                            "emit segment2d: \"ax,ay;bx,by\"");
            sub->add_option("--chain", chain_text,
                            "emit chain2d: \"x,y;x,y;...\"");
        }
        sub->callback([&gen_kind, kind] { gen_kind = kind; });
    }

    // render / verify / bench
    std::string r_instance, r_result, r_mode = "scene", r_svg;
    auto* rend = app.add_subcommand("render", "emit SVG figures");
    rend->add_option("--instance", r_instance)->required();
    rend->add_option("--result", r_result);
    rend->add_option("--mode", r_mode, "scene|events|curves");
    rend->add_option("--svg", r_svg, "output SVG path")->required();

    std::string v_instance, v_result;
    auto* verify = app.add_subcommand("verify", "recount a stored witness");
    verify->add_option("--instance", v_instance)->required();
    verify->add_option("--result", v_result)->required();

    std::vector<int> bench_teeth{4, 8, 16, 32};
    int bench_points = 1;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench",
                                     "baseline vs output-sensitive timings");
    bench->add_option("--teeth", bench_teeth, "comb sizes");
    bench->add_option("--points", bench_points, "threaded points");
    bench->add_option("--out", bench_out, "write the table as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_fixed->parsed()) return run_solve_fixed(fixed_opts, algo);
        if (solve_seg->parsed()) return run_solve_segment(seg_opts);
        if (solve_chain->parsed()) return run_solve_chain(chain_opts);
        if (solve3d->parsed()) return run_solve_3d(opts3d);
        if (orc_fixed->parsed()) return run_oracle(ofix_opts, "fixed", 0, 0);
        if (orc_seg->parsed()) return run_oracle(oseg_opts, "segment", grid, 0);
        if (orc_3d->parsed()) return run_oracle(o3d_opts, "3d", 0, samples);
        if (!gen_kind.empty())
            return run_gen(gen_kind, teeth, vertices, count, bbox, size, subdiv,
                           points, seed, gen_out, segment_text, chain_text);
        if (rend->parsed()) return run_render(r_instance, r_result, r_mode, r_svg);
        if (verify->parsed()) return run_verify(v_instance, v_result);
        if (bench->parsed()) return run_bench(bench_teeth, bench_points, bench_out);
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 2;
    } catch (const InvalidParams& e) {
        std::fprintf(stderr, "invalid parameters: %s\n", e.what());
        return 3;
    } catch (const InvalidScp& e) {
        std::fprintf(stderr, "infeasible instance: %s\n", e.what());
        return 3;
    } catch (const DegenerateSegment& e) {
        std::fprintf(stderr, "degenerate input: %s\n", e.what());
        return 3;
    } catch (const IncompatibleMode& e) {
        std::fprintf(stderr, "incompatible mode: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
    return 0;
}
