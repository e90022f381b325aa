#include "medialkit/report.hpp"

#include <cmath>

namespace medialkit {

using nlohmann::ordered_json;

ordered_json report_to_json(const AnalysisReport& r, bool include_meta) {
    ordered_json j;
    j["tool"] = "medial-kit";
    j["command"] = r.command;
    j["params"] = r.params;
    j["results"] = r.results;
    j["warnings"] = r.warnings;
    if (include_meta) {
        ordered_json meta;
        meta["timestamp"] = r.timestamp;
        meta["elapsed_s"] = r.elapsed_s;
        j["meta"] = meta;
    }
    return j;
}

void write_report(const AnalysisReport& r, std::ostream& out, bool include_meta) {
    out << report_to_json(r, include_meta).dump(2) << "\n";
}

std::string verdict_name(ReachVerdict v) {
    switch (v) {
        case ReachVerdict::Reached: return "reached";
        case ReachVerdict::Separated: return "separated";
        case ReachVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string criterion_name(CriterionVerdict v) {
    return v == CriterionVerdict::MedialApproaches ? "medial_approaches" : "inconclusive";
}

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

ordered_json basin_json(const BasinAnalysis& b) {
    ordered_json j;
    j["d"] = b.d;
    j["member_count"] = b.member_count;
    j["basin_count"] = b.basin_count;
    j["theta_sep"] = b.theta_sep;
    j["wrapped"] = b.wrapped;
    ordered_json reps = ordered_json::array();
    for (const Vec& r : b.representatives) reps.push_back(vec_json(r));
    j["representatives"] = reps;
    return j;
}

ordered_json near_json(const NearSet& ns) {
    ordered_json j;
    j["d"] = ns.d;
    j["member_count"] = ns.members.size();
    j["angular_diameter"] = ns.angular_diameter;
    return j;
}

ordered_json cone_estimate_json(const ConeEstimate& c) {
    ordered_json j;
    j["base"] = vec_json(c.base);
    j["scales"] = c.scales;
    j["stabilized"] = c.stabilized;
    j["drift"] = c.drift;
    ordered_json dirs = ordered_json::array();
    for (const Vec& d : c.directions) dirs.push_back(vec_json(d));
    j["directions"] = dirs;
    return j;
}

ordered_json cone_criterion_json(const ConeCriterionResult& c) {
    ordered_json j;
    j["cone"] = cone_estimate_json(c.cone);
    j["convex"] = c.convexity.convex;
    j["subspace_dim"] = c.convexity.subspace_dim;
    j["witness_gap"] = c.convexity.witness_gap;
    if (!c.convexity.convex) j["missing_direction"] = vec_json(c.convexity.missing_direction);
    j["flags_reach"] = (c.verdict == CriterionVerdict::MedialApproaches);
    j["verdict"] = criterion_name(c.verdict);
    j["detail"] = c.detail;
    return j;
}

ordered_json liminf_json(const LiminfResult& l) {
    ordered_json j;
    j["worst_score"] = l.worst_score;
    j["witness"] = vec_json(l.witness);
    j["approach_count"] = l.approach_count;
    j["containment_fails"] = l.containment_fails;
    j["flags_reach"] = (l.verdict == CriterionVerdict::MedialApproaches);
    j["verdict"] = criterion_name(l.verdict);
    j["detail"] = l.detail;
    return j;
}

namespace {

ordered_json profile_json(const GrowthProfile& p) {
    ordered_json j;
    j["tangent_dim"] = p.tangent_dim;
    j["nominal_eps"] = p.nominal_eps;
    j["achieved_eps"] = p.achieved_eps;
    j["values"] = p.values;
    return j;
}

ordered_json fit_json(const ExponentFit& f) {
    ordered_json j;
    j["alpha"] = f.alpha;
    j["coefficient"] = f.coefficient;
    j["alpha_stderr"] = f.alpha_stderr;
    j["log_residual"] = f.log_residual;
    j["degenerate"] = f.degenerate;
    j["superquadratic"] = f.superquadratic;
    return j;
}

}  // namespace

ordered_json sq_json(const SuperquadracityAnalysis& s) {
    ordered_json j;
    j["base"] = vec_json(s.frame.base);
    j["tangent_dim"] = s.frame.tangent_dim;
    j["profile"] = profile_json(s.profile);
    j["fit"] = fit_json(s.fit);
    ordered_json axes = ordered_json::array();
    for (std::size_t i = 0; i < s.axis_fits.size(); ++i) {
        ordered_json a;
        a["profile"] = profile_json(s.axis_profiles[i]);
        a["fit"] = fit_json(s.axis_fits[i]);
        axes.push_back(a);
    }
    j["axis_fits"] = axes;
    j["superquadratic"] = s.superquadratic;
    return j;
}

ordered_json reach_json(const ReachAnalysis& r) {
    ordered_json j;
    j["x0"] = vec_json(r.x0);
    j["verdict"] = verdict_name(r.verdict);
    j["rule"] = r.rule;
    j["delta_sep"] = r.delta_sep;
    j["slope"] = r.slope;
    j["c0"] = r.c0;
    j["gamma"] = r.gamma;
    j["pool_fit_valid"] = r.pool_fit_valid;
    ordered_json levels = ordered_json::array();
    for (const ReachLevel& l : r.levels) {
        ordered_json lv;
        lv["h"] = l.h;
        lv["delta_raw"] = l.delta_raw;
        lv["count"] = l.count;
        lv["window"] = l.window;
        lv["capped"] = l.capped;
        levels.push_back(lv);
    }
    j["levels"] = levels;
    ordered_json branch = ordered_json::array();
    for (const auto& bp : r.branch_points) branch.push_back({bp[0], bp[1]});
    j["branch_points"] = branch;
    j["detail"] = r.detail;
    return j;
}

ordered_json radius_json(const LimitingRadius& r) {
    ordered_json j;
    j["a"] = vec_json(r.a);
    j["r"] = r.r;
    j["bands"] = r.bands;
    j["samples"] = r.samples;
    ordered_json cl = ordered_json::array();
    for (const RadiusCluster& c : r.clusters) {
        ordered_json cj;
        cj["direction"] = vec_json(c.direction);
        cj["r_limit"] = c.r_limit;
        ordered_json pb = ordered_json::array();
        for (double v : c.per_band) {
            if (std::isnan(v))
                pb.push_back(nullptr);
            else
                pb.push_back(v);
        }
        cj["per_band"] = pb;
        cl.push_back(cj);
    }
    j["clusters"] = cl;
    return j;
}

ordered_json continuity_json(const ContinuityScan& s) {
    ordered_json j;
    j["radii"] = s.radii;
    ordered_json flags = ordered_json::array();
    for (auto f : s.flags) flags.push_back(static_cast<bool>(f));
    j["flags"] = flags;
    j["violations"] = s.violations;
    return j;
}

}  // namespace medialkit
