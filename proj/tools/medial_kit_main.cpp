#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "medialkit/cones.hpp"
#include "medialkit/corpus.hpp"
#include "medialkit/medial_axis.hpp"
#include "medialkit/proximity.hpp"
#include "medialkit/reaching_radius.hpp"
#include "medialkit/report.hpp"
#include "medialkit/sampling.hpp"
#include "medialkit/set_model.hpp"
#include "medialkit/superquadracity.hpp"
#include "medialkit/svg.hpp"
#include "medialkit/verify.hpp"

namespace {

using namespace medialkit;

Vec parse_point(const std::string& s) {
    std::vector<double> coords;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty coordinate in point '" + s + "'");
        coords.push_back(std::stod(tok));
    }
    if (coords.empty()) throw std::invalid_argument("could not parse point '" + s + "'");
    return Vec::from(coords);
}

// "lo:hi,lo:hi,..." one pair per axis.
DomainBox parse_box(const std::string& s) {
    DomainBox box;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("box axis '" + tok + "' is not lo:hi");
        double lo = std::stod(tok.substr(0, colon));
        double hi = std::stod(tok.substr(colon + 1));
        if (!(lo < hi)) throw std::invalid_argument("box axis '" + tok + "' has lo >= hi");
        box.axes.push_back({lo, hi});
    }
    if (box.dim() == 0) throw std::invalid_argument("could not parse box '" + s + "'");
    return box;
}

std::string now_iso8601() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void emit_report(AnalysisReport& rep, const std::string& out_path, double elapsed) {
    rep.timestamp = now_iso8601();
    rep.elapsed_s = elapsed;
    if (out_path.empty()) {
        write_report(rep, std::cout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
    write_report(rep, out);
}

struct CommonArgs {
    std::string set_arg;
    std::string point_arg;
    std::string out_path;
    double h = 0.01;
    double tau_res = -1;  // default h/10
    int ladder_depth = 3;
    double theta_min = kDefaultThetaMin;
};

void attach_common(CLI::App* cmd, CommonArgs& args, bool needs_point) {
    // Free the short -h so --h can mean the sampling resolution.
    cmd->set_help_flag("--help", "print help and exit");
    cmd->add_option("--set", args.set_arg, "corpus:<id> or a descriptor JSON file")->required();
    auto* p = cmd->add_option("--point", args.point_arg, "query point, comma separated");
    if (needs_point) p->required();
    cmd->add_option("--h", args.h, "sampling resolution");
    cmd->add_option("--tau-res", args.tau_res, "projection tolerance (default h/10)");
    cmd->add_option("--ladder-depth", args.ladder_depth, "refinement ladder depth");
    cmd->add_option("--theta-min", args.theta_min, "minimal feet separation angle");
    cmd->add_option("--out", args.out_path, "write the JSON report here instead of stdout");
}

SamplingConfig config_from(const CommonArgs& args) {
    SamplingConfig cfg;
    cfg.h = args.h;
    cfg.tau_res = args.tau_res > 0 ? args.tau_res : args.h / 10;
    cfg.ladder_depth = static_cast<std::size_t>(args.ladder_depth);
    return cfg;
}

double noise_floor_for(const SampledSet& cloud) {
    bool implicit = false;
    std::vector<const SetDescriptor*> stack{&cloud.descriptor};
    while (!stack.empty()) {
        const SetDescriptor* d = stack.back();
        stack.pop_back();
        if (d->kind == SetKind::Implicit) implicit = true;
        for (const SetDescriptor& m : d->members) stack.push_back(&m);
    }
    double f = 3 * cloud.tau_res + 1e-12;
    if (implicit) f = std::max(f, cloud.h / 8);
    return f;
}

int run_analyze(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);
    Vec point = parse_point(args.point_arg);
    if (point.size() != cloud.dim())
        throw std::invalid_argument("point dimension does not match the set");
    KdTree tree(cloud.points);

    AnalysisReport rep;
    rep.command = "analyze";
    rep.params["set"] = args.set_arg;
    rep.params["point"] = vec_json(point);
    rep.params["h"] = cfg.h;
    rep.params["tau_res"] = cfg.tau_res;

    double eps_near = std::max(0.12, 2 * cloud.h);
    rep.results["near"] = near_json(near_set(tree, point, eps_near, cloud.h));
    rep.results["basins"] = basin_json(analyze_basins(tree, point, cloud.h, cloud.tau_res));

    ConeCriterionResult cc = tangent_cone_criterion(tree, point, cloud.h);
    rep.results["tangent_cone"] = cone_criterion_json(cc);
    if (!cc.cone.stabilized)
        rep.warnings.push_back("tangent cone did not stabilize across scales");
    if (cc.verdict == CriterionVerdict::MedialApproaches) {
        LiminfResult lf = liminf_criterion(tree, point, cloud.h);
        rep.results["liminf"] = liminf_json(lf);
    }

    try {
        SuperquadracityAnalysis sq =
            project_and_classify(tree, point, cloud.h, noise_floor_for(cloud));
        rep.results["superquadracity"] = sq_json(sq);
        if (sq.fit.degenerate) rep.warnings.push_back("growth exponent fit is degenerate");
    } catch (const FrameError& e) {
        rep.warnings.push_back(std::string("superquadracity skipped: ") + e.what());
    }

    ReachAnalysis ra = detect_reach(desc, cfg, point, args.theta_min);
    rep.results["reach"] = reach_json(ra);
    if (ra.verdict == ReachVerdict::Inconclusive)
        rep.warnings.push_back("reach analysis is inconclusive: " + ra.rule);

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_medial(const CommonArgs& args, const std::string& grid_box, double grid_spacing,
               const std::string& csv_path) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);
    KdTree tree(cloud.points);

    MedialScanConfig mc;
    mc.region = parse_box(grid_box);
    mc.spacing = grid_spacing;
    mc.theta_min = args.theta_min;
    if (mc.region.dim() != cloud.dim())
        throw std::invalid_argument("grid box dimension does not match the set");
    std::vector<MedialPoint> pts = detect_medial_points(cloud, tree, mc);

    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw std::invalid_argument("cannot open CSV file '" + csv_path + "'");
        write_medial_csv(pts, cloud.dim(), out);
    }

    AnalysisReport rep;
    rep.command = "medial";
    rep.params["set"] = args.set_arg;
    rep.params["h"] = cfg.h;
    rep.params["grid_spacing"] = grid_spacing;
    rep.params["theta_min"] = mc.theta_min;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const MedialPoint& p : pts) {
        nlohmann::ordered_json j;
        j["location"] = vec_json(p.location);
        j["d"] = p.d;
        j["theta_sep"] = p.theta_sep;
        arr.push_back(j);
    }
    rep.results["count"] = pts.size();
    rep.results["points"] = arr;
    if (pts.empty()) rep.warnings.push_back("no medial points detected in the grid box");

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_reach(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    Vec point = parse_point(args.point_arg);
    ReachAnalysis ra = detect_reach(desc, cfg, point, args.theta_min);

    AnalysisReport rep;
    rep.command = "reach";
    rep.params["set"] = args.set_arg;
    rep.params["point"] = vec_json(point);
    rep.params["h"] = cfg.h;
    rep.params["ladder_depth"] = cfg.ladder_depth;
    rep.results["reach"] = reach_json(ra);
    if (ra.verdict == ReachVerdict::Inconclusive)
        rep.warnings.push_back("reach analysis is inconclusive: " + ra.rule);

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_cone(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);
    Vec point = parse_point(args.point_arg);
    if (point.size() != cloud.dim())
        throw std::invalid_argument("point dimension does not match the set");
    KdTree tree(cloud.points);

    AnalysisReport rep;
    rep.command = "cone";
    rep.params["set"] = args.set_arg;
    rep.params["point"] = vec_json(point);
    rep.params["h"] = cfg.h;
    ConeCriterionResult cc = tangent_cone_criterion(tree, point, cloud.h);
    rep.results["tangent_cone"] = cone_criterion_json(cc);
    rep.results["liminf"] = liminf_json(liminf_criterion(tree, point, cloud.h));
    if (!cc.cone.stabilized)
        rep.warnings.push_back("tangent cone did not stabilize across scales");

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_sq(const CommonArgs& args) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);
    Vec point = parse_point(args.point_arg);
    if (point.size() != cloud.dim())
        throw std::invalid_argument("point dimension does not match the set");
    KdTree tree(cloud.points);

    AnalysisReport rep;
    rep.command = "sq";
    rep.params["set"] = args.set_arg;
    rep.params["point"] = vec_json(point);
    rep.params["h"] = cfg.h;
    SuperquadracityAnalysis sq = project_and_classify(tree, point, cloud.h, noise_floor_for(cloud));
    rep.results["superquadracity"] = sq_json(sq);
    if (sq.fit.degenerate) rep.warnings.push_back("growth exponent fit is degenerate");

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_radius(const CommonArgs& args, double r_max) {
    auto t0 = std::chrono::steady_clock::now();
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);
    Vec point = parse_point(args.point_arg);
    if (point.size() != cloud.dim())
        throw std::invalid_argument("point dimension does not match the set");
    KdTree tree(cloud.points);

    AnalysisReport rep;
    rep.command = "radius";
    rep.params["set"] = args.set_arg;
    rep.params["point"] = vec_json(point);
    rep.params["h"] = cfg.h;
    rep.params["r_max"] = r_max;
    LimitingRadius lr = limiting_radius(tree, point, cloud.h, cloud.tau_res, r_max);
    rep.results["radius"] = radius_json(lr);
    if (lr.clusters.empty())
        rep.warnings.push_back("no normal directions found; the radius is the cap r_max");

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(rep, args.out_path, elapsed);
    return 0;
}

int run_corpus(const std::string& action, const std::string& id) {
    if (action == "list") {
        for (const CorpusEntry& e : corpus())
            std::cout << e.id << "  " << e.summary << "\n";
        return 0;
    }
    if (action == "show") {
        const CorpusEntry& e = corpus_entry(id);
        std::cout << e.id << "\n  " << e.summary << "\n  descriptor: "
                  << descriptor_to_json(e.descriptor).dump() << "\n  interest points:";
        for (const Vec& p : e.interest_points) std::cout << " " << to_string(p);
        std::cout << "\n  expectations:\n";
        for (const CorpusExpectation& ex : e.expectations)
            std::cout << "    " << ex.quantity << " = " << ex.value << " +/- " << ex.tol << "  ("
                      << ex.basis << ")\n";
        return 0;
    }
    throw std::invalid_argument("corpus action must be list or show");
}

int run_plot(const CommonArgs& args, const std::string& kind_name, const std::string& svg_path) {
    SetDescriptor desc = resolve_set_argument(args.set_arg);
    SamplingConfig cfg = config_from(args);
    SampledSet cloud = sample_set(desc, cfg);

    PlotSpec spec;
    spec.kind = plot_kind_from_name(kind_name);
    spec.title = args.set_arg + " at h = " + std::to_string(cfg.h);
    PlotSeries series;
    series.label = "samples";
    series.points = cloud.points;
    spec.series.push_back(series);

    if (svg_path.empty()) {
        emit_plot(spec, std::cout);
        return 0;
    }
    std::ofstream out(svg_path);
    if (!out) throw std::invalid_argument("cannot open SVG file '" + svg_path + "'");
    emit_plot(spec, out);
    return 0;
}

int run_verify_cmd(const std::string& only, bool self_test) {
    VerifyResult r = run_verify(only, self_test);
    print_verify(r, std::cout);
    return r.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"medial-kit: which singular points does the medial axis approach?"};
    app.set_help_flag("--help", "print help and exit");
    app.require_subcommand(1);

    CommonArgs analyze_args, medial_args, reach_args, cone_args, sq_args, radius_args, plot_args;
    std::string grid_box, csv_path;
    double grid_spacing = 0;
    double r_max = 4.0;
    std::string corpus_action, corpus_id;
    std::string plot_kind = "scatter2d", svg_path;
    std::string verify_only;
    bool verify_self_test = false;

    CLI::App* analyze = app.add_subcommand("analyze", "full bundle at a point");
    attach_common(analyze, analyze_args, true);

    CLI::App* medial = app.add_subcommand("medial", "scan a grid box for medial points");
    attach_common(medial, medial_args, false);
    medial->add_option("--grid-box", grid_box, "scan box, lo:hi per axis, comma separated")
        ->required();
    medial->add_option("--grid-spacing", grid_spacing, "scan grid spacing")->required();
    medial->add_option("--csv", csv_path, "also write detections as CSV");

    CLI::App* reach = app.add_subcommand("reach", "refinement-ladder reach analysis at a point");
    attach_common(reach, reach_args, true);

    CLI::App* cone = app.add_subcommand("cone", "tangent cone criteria at a point");
    attach_common(cone, cone_args, true);

    CLI::App* sq = app.add_subcommand("sq", "superquadratic growth analysis at a point");
    attach_common(sq, sq_args, true);

    CLI::App* radius = app.add_subcommand("radius", "limiting reaching radius at a point");
    attach_common(radius, radius_args, true);
    radius->add_option("--r-max", r_max, "radius search cap");

    CLI::App* corpus_cmd = app.add_subcommand("corpus", "list or show built-in example sets");
    corpus_cmd->add_option("action", corpus_action, "list or show")->required();
    corpus_cmd->add_option("id", corpus_id, "corpus entry id for show");

    CLI::App* plot = app.add_subcommand("plot", "emit an SVG scatter of the sampled set");
    attach_common(plot, plot_args, false);
    plot->add_option("--kind", plot_kind, "scatter2d, scatter3d or loglog");
    plot->add_option("--svg", svg_path, "output SVG path (default stdout)");

    CLI::App* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_option("--only", verify_only, "row id prefix or tag filter");
    verify->add_flag("--self-test", verify_self_test,
                     "bias the first measured value to prove failures are caught");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(analyze_args);
        if (medial->parsed()) return run_medial(medial_args, grid_box, grid_spacing, csv_path);
        if (reach->parsed()) return run_reach(reach_args);
        if (cone->parsed()) return run_cone(cone_args);
        if (sq->parsed()) return run_sq(sq_args);
        if (radius->parsed()) return run_radius(radius_args, r_max);
        if (corpus_cmd->parsed()) return run_corpus(corpus_action, corpus_id);
        if (plot->parsed()) return run_plot(plot_args, plot_kind, svg_path);
        if (verify->parsed()) return run_verify_cmd(verify_only, verify_self_test);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
