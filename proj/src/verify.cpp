#include "medialkit/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "medialkit/cones.hpp"
#include "medialkit/corpus.hpp"
#include "medialkit/medial_axis.hpp"
#include "medialkit/proximity.hpp"
#include "medialkit/reaching_radius.hpp"
#include "medialkit/sampling.hpp"
#include "medialkit/superquadracity.hpp"

namespace medialkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Ctx {
    std::string filter;
    bool perturb = false;
    VerifyResult* out = nullptr;
};

bool row_selected(const Ctx& ctx, const std::string& id, const std::string& tag) {
    if (ctx.filter.empty()) return true;
    if (id.rfind(ctx.filter, 0) == 0) return true;
    return tag == ctx.filter;
}

// A criterion body runs when the filter could select any of its rows: either
// the filter names the criterion (or a row inside it) or one of its tags.
bool group_selected(const Ctx& ctx, const std::string& prefix,
                    const std::vector<std::string>& tags) {
    if (ctx.filter.empty()) return true;
    if (ctx.filter.rfind(prefix, 0) == 0) return true;
    if (prefix.rfind(ctx.filter, 0) == 0) return true;
    for (const std::string& t : tags)
        if (t == ctx.filter) return true;
    return false;
}

void add(Ctx& ctx, const std::string& id, const std::string& tag, const std::string& expected,
         const std::string& observed, const std::string& tolerance, bool pass, double elapsed) {
    if (!row_selected(ctx, id, tag)) return;
    VerifyRow row;
    row.id = id;
    row.tag = tag;
    row.expected = expected;
    row.observed = observed;
    row.tolerance = tolerance;
    row.pass = pass;
    row.elapsed_s = elapsed;
    ctx.out->rows.push_back(row);
    if (!pass) ctx.out->all_pass = false;
}

void add_value(Ctx& ctx, const std::string& id, const std::string& tag, double expected,
               double observed, double tol, double elapsed) {
    add(ctx, id, tag, fmt(expected), fmt(observed), fmt(tol),
        std::fabs(observed - expected) <= tol, elapsed);
}

void add_error(Ctx& ctx, const std::string& prefix, const std::string& tag,
               const std::string& what, double elapsed) {
    add(ctx, prefix + ".error", tag, "no exception", what, "", false, elapsed);
}

SampledSet corpus_cloud(const std::string& id, double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    return sample_set(corpus_entry(id).descriptor, cfg);
}

bool contains_implicit(const SetDescriptor& d) {
    if (d.kind == SetKind::Implicit) return true;
    for (const SetDescriptor& m : d.members)
        if (contains_implicit(m)) return true;
    return false;
}

// Growth values below the sampling noise cannot witness an exponent. Implicit
// clouds carry a projection standoff of order h in the worst corners.
double noise_floor_for(const SampledSet& cloud) {
    double f = 3 * cloud.tau_res + 1e-12;
    if (contains_implicit(cloud.descriptor)) f = std::max(f, cloud.h / 8);
    return f;
}

std::string verdict_name(ReachVerdict v) {
    switch (v) {
        case ReachVerdict::Reached: return "Reached";
        case ReachVerdict::Separated: return "Separated";
        default: return "Inconclusive";
    }
}

std::string verdict_name(CriterionVerdict v) {
    return v == CriterionVerdict::MedialApproaches ? "MedialApproaches" : "Inconclusive";
}

SamplingConfig reach_config(double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    cfg.ladder_factor = 0.5;
    cfg.ladder_depth = 3;
    return cfg;
}

// --- AC1: parabola standoff --------------------------------------------

void ac1(Ctx& ctx) {
    if (!group_selected(ctx, "AC1", {"reach"})) return;
    Stopwatch sw;
    try {
        ReachAnalysis ra =
            detect_reach(corpus_entry("parabola").descriptor, reach_config(0.02), {0.0, 0.0});
        double t = sw.seconds();
        add(ctx, "AC1.verdict", "reach", "Separated", verdict_name(ra.verdict) + " (" + ra.rule + ")",
            "exact", ra.verdict == ReachVerdict::Separated, t);
        double delta = ra.delta_sep + (ctx.perturb ? 0.05 : 0.0);
        add_value(ctx, "AC1.delta", "reach", 0.5, delta, 0.02, 0);
        add(ctx, "AC1.time", "reach", "< 20 s", fmt(t) + " s", "", t < 20, t);
    } catch (const std::exception& e) {
        add_error(ctx, "AC1", "reach", e.what(), sw.seconds());
    }
}

// --- AC2: cusp exponent and reach ---------------------------------------

void ac2(Ctx& ctx) {
    if (!group_selected(ctx, "AC2", {"sq", "reach"})) return;
    Stopwatch sw;
    try {
        const double h = 4e-4;
        SampledSet cloud = corpus_cloud("cusp", h);
        KdTree tree(cloud.points);
        SuperquadracityAnalysis sq =
            project_and_classify(tree, Vec{0.0, 0.0}, h, noise_floor_for(cloud));
        add_value(ctx, "AC2.alpha", "sq", 1.5, sq.fit.alpha, 0.05, sw.seconds());
        add(ctx, "AC2.sq", "sq", "superquadratic", sq.superquadratic ? "superquadratic" : "not superquadratic",
            "exact", sq.superquadratic, 0);

        Stopwatch sw2;
        ReachAnalysis ra =
            detect_reach(corpus_entry("cusp").descriptor, reach_config(0.02), {0.0, 0.0});
        double t2 = sw2.seconds();
        add(ctx, "AC2.verdict", "reach", "Reached", verdict_name(ra.verdict) + " (" + ra.rule + ")",
            "exact", ra.verdict == ReachVerdict::Reached, t2);

        bool close = ra.levels.size() >= 2;
        std::ostringstream obs;
        std::size_t first = ra.levels.size() >= 2 ? ra.levels.size() - 2 : 0;
        for (std::size_t i = first; i < ra.levels.size(); ++i) {
            const ReachLevel& lv = ra.levels[i];
            close = close && !lv.capped && lv.delta_raw <= 5 * lv.h;
            obs << "delta(" << fmt(lv.h) << ")=" << fmt(lv.delta_raw) << " vs " << fmt(5 * lv.h)
                << (i + 1 < ra.levels.size() ? "; " : "");
        }
        add(ctx, "AC2.delta5h", "reach", "delta_raw <= 5h at the two finest levels", obs.str(),
            "exact", close, 0);
        double total = sw.seconds();
        add(ctx, "AC2.time", "sq", "< 30 s", fmt(total) + " s", "", total < 30, total);
    } catch (const std::exception& e) {
        add_error(ctx, "AC2", "sq", e.what(), sw.seconds());
    }
}

// --- AC3: cone point distance and near set ------------------------------

void ac3(Ctx& ctx) {
    if (!group_selected(ctx, "AC3", {"near"})) return;
    Stopwatch sw;
    try {
        const double h = 0.01;
        SampledSet cloud = corpus_cloud("cone", h);
        KdTree tree(cloud.points);
        Vec apex_probe{0.0, 0.0, 1.0};
        double d = distance_to_set(tree, apex_probe);
        add_value(ctx, "AC3.d", "near", 0.70710678, d, 0.01, sw.seconds());
        NearSet ns = near_set(tree, apex_probe, 0.12, h);
        add(ctx, "AC3.diam", "near", "> 2.5 rad", fmt(ns.angular_diameter) + " rad", "",
            ns.angular_diameter > 2.5, 0);
    } catch (const std::exception& e) {
        add_error(ctx, "AC3", "near", e.what(), sw.seconds());
    }
}

// --- AC4: convex-but-approached surface ---------------------------------

void ac4(Ctx& ctx) {
    if (!group_selected(ctx, "AC4", {"cone"})) return;
    Stopwatch sw;
    try {
        const double h = 0.02;
        SampledSet cloud = corpus_cloud("ghomi", h);
        KdTree tree(cloud.points);
        Vec origin{0.0, 0.0, 0.0};

        ConeCriterionResult cc = tangent_cone_criterion(tree, origin, h);
        bool tangent_silent = cc.convexity.convex && cc.cone.stabilized &&
                              cc.verdict != CriterionVerdict::MedialApproaches;
        std::ostringstream tobs;
        tobs << (cc.convexity.convex ? "convex" : "nonconvex") << ", "
             << (cc.cone.stabilized ? "stabilized" : "unstable") << ", "
             << verdict_name(cc.verdict);
        add(ctx, "AC4.tangent", "cone", "convex, stabilized, Inconclusive", tobs.str(), "exact",
            tangent_silent, sw.seconds());

        Stopwatch sw2;
        LiminfResult lf = liminf_criterion(tree, origin, h);
        add(ctx, "AC4.liminf", "cone", "MedialApproaches", verdict_name(lf.verdict), "exact",
            lf.verdict == CriterionVerdict::MedialApproaches, sw2.seconds());

        Vec e1{1.0, 0.0, 0.0};
        double wit = kPi;
        if (norm(lf.witness) > 0)
            wit = std::min(angle_between(lf.witness, e1), angle_between(lf.witness, -1.0 * e1));
        add(ctx, "AC4.witness", "cone", "within pi/8 of +/- e1", fmt(wit) + " rad", fmt(kPi / 8),
            wit <= kPi / 8, 0);
        double total = sw.seconds();
        add(ctx, "AC4.time", "cone", "< 60 s", fmt(total) + " s", "", total < 60, total);
    } catch (const std::exception& e) {
        add_error(ctx, "AC4", "cone", e.what(), sw.seconds());
    }
}

// --- AC5: quadratic-growth wedge that is still reached -------------------

void ac5(Ctx& ctx) {
    if (!group_selected(ctx, "AC5", {"sq", "reach"})) return;
    Stopwatch sw;
    try {
        Vec origin{0.0, 0.0, 0.0};
        {
            const double h = 0.004;
            SampledSet cloud = corpus_cloud("kontrsuperq", h);
            KdTree tree(cloud.points);
            SuperquadracityAnalysis sq =
                project_and_classify(tree, origin, h, noise_floor_for(cloud));
            add(ctx, "AC5.class", "sq", "not superquadratic",
                sq.superquadratic ? "superquadratic" : "not superquadratic", "exact",
                !sq.superquadratic, sw.seconds());
            add_value(ctx, "AC5.alpha", "sq", 2.0, sq.fit.alpha, 0.1, 0);
        }

        Stopwatch sw2;
        ReachAnalysis ra =
            detect_reach(corpus_entry("kontrsuperq").descriptor, reach_config(0.02), origin);
        add(ctx, "AC5.verdict", "reach", "Reached", verdict_name(ra.verdict) + " (" + ra.rule + ")",
            "exact", ra.verdict == ReachVerdict::Reached, sw2.seconds());

        Stopwatch sw3;
        const double h = 0.02;
        SampledSet cloud = corpus_cloud("kontrsuperq", h);
        KdTree tree(cloud.points);
        MedialScanConfig mc;
        mc.region.axes = {{0.04, 0.36}, {-0.16, 0.16}, {0.04, 0.36}};
        mc.spacing = h;
        std::vector<MedialPoint> pts = detect_medial_points(cloud, tree, mc);
        Vec target{0.2, 0.0, 0.2};
        double best = std::numeric_limits<double>::infinity();
        for (const MedialPoint& p : pts) best = std::min(best, dist(p.location, target));
        add(ctx, "AC5.medial", "reach", "detection within 5h of (0.2, 0, 0.2)",
            pts.empty() ? "no detections" : fmt(best) + " away", fmt(5 * h), best <= 5 * h,
            sw3.seconds());
    } catch (const std::exception& e) {
        add_error(ctx, "AC5", "sq", e.what(), sw.seconds());
    }
}

// --- AC6: trumpet surfaces reached along the spike ------------------------

void ac6(Ctx& ctx) {
    if (!group_selected(ctx, "AC6", {"reach"})) return;
    Stopwatch sw;
    try {
        Vec origin{0.0, 0.0, 0.0};
        ReachAnalysis g =
            detect_reach(corpus_entry("trabka_gamma").descriptor, reach_config(0.08), origin);
        add(ctx, "AC6.gamma", "reach", "Reached", verdict_name(g.verdict) + " (" + g.rule + ")",
            "exact", g.verdict == ReachVerdict::Reached, sw.seconds());
        Stopwatch sw2;
        ReachAnalysis u =
            detect_reach(corpus_entry("trabka").descriptor, reach_config(0.08), origin);
        add(ctx, "AC6.union", "reach", "Reached", verdict_name(u.verdict) + " (" + u.rule + ")",
            "exact", u.verdict == ReachVerdict::Reached, sw2.seconds());
    } catch (const std::exception& e) {
        add_error(ctx, "AC6", "reach", e.what(), sw.seconds());
    }
}

// --- AC7: separated controls ---------------------------------------------

void ac7(Ctx& ctx) {
    if (!group_selected(ctx, "AC7", {"cone", "sq", "reach"})) return;
    Stopwatch sw;
    try {
        Vec origin2{0.0, 0.0};
        {
            const double h = 0.005;
            SampledSet cloud = corpus_cloud("halfline", h);
            KdTree tree(cloud.points);
            ConeCriterionResult cc = tangent_cone_criterion(tree, origin2, h);
            bool silent = cc.convexity.convex && cc.verdict != CriterionVerdict::MedialApproaches;
            add(ctx, "AC7.halfline_cone", "cone", "convex, Inconclusive",
                std::string(cc.convexity.convex ? "convex" : "nonconvex") + ", " +
                    verdict_name(cc.verdict),
                "exact", silent, sw.seconds());
        }
        {
            Stopwatch sw2;
            ReachAnalysis ra =
                detect_reach(corpus_entry("halfline").descriptor, reach_config(0.02), origin2);
            bool ok = ra.verdict == ReachVerdict::Separated &&
                      ra.rule == "no medial points within reach";
            add(ctx, "AC7.halfline_reach", "reach", "Separated (no medial points within reach)",
                verdict_name(ra.verdict) + " (" + ra.rule + ")", "exact", ok, sw2.seconds());
        }
        {
            Stopwatch sw3;
            const double h = 4e-4;
            SampledSet cloud = corpus_cloud("x2sgnx", h);
            KdTree tree(cloud.points);
            SuperquadracityAnalysis sq =
                project_and_classify(tree, origin2, h, noise_floor_for(cloud));
            add(ctx, "AC7.x2_class", "sq", "not superquadratic",
                sq.superquadratic ? "superquadratic" : "not superquadratic", "exact",
                !sq.superquadratic, sw3.seconds());
        }
        {
            Stopwatch sw4;
            ReachAnalysis ra =
                detect_reach(corpus_entry("x2sgnx").descriptor, reach_config(0.02), origin2);
            add(ctx, "AC7.x2_verdict", "reach", "Separated",
                verdict_name(ra.verdict) + " (" + ra.rule + ")", "exact",
                ra.verdict == ReachVerdict::Separated, sw4.seconds());
        }
    } catch (const std::exception& e) {
        add_error(ctx, "AC7", "reach", e.what(), sw.seconds());
    }
}

// --- AC8: reaching radius values and continuity ---------------------------

void ac8(Ctx& ctx) {
    if (!group_selected(ctx, "AC8", {"radius"})) return;
    Stopwatch sw;
    try {
        const double h = 0.005;
        const double r_max = 3.0;
        std::size_t violations = 0;

        {
            SampledSet cloud = corpus_cloud("circle", h);
            KdTree tree(cloud.points);
            LimitingRadius lr = limiting_radius(tree, Vec{1.0, 0.0}, h, cloud.tau_res, r_max);
            add_value(ctx, "AC8.circle", "radius", 1.0, lr.r, 0.05, sw.seconds());
            std::vector<Vec> path;
            std::vector<Vec> dirs;
            for (int k = 0; k < 64; ++k) {
                double t = kPi * static_cast<double>(k) / 32.0;
                Vec p{std::cos(t), std::sin(t)};
                path.push_back(p);
                dirs.push_back(-1.0 * p);
            }
            violations += radius_continuity_scan(tree, path, dirs, h, cloud.tau_res, r_max)
                              .violations;
        }
        {
            Stopwatch sw2;
            SampledSet cloud = corpus_cloud("parabola", h);
            KdTree tree(cloud.points);
            LimitingRadius lr = limiting_radius(tree, Vec{0.0, 0.0}, h, cloud.tau_res, r_max);
            add_value(ctx, "AC8.parabola", "radius", 0.5, lr.r, 0.05, sw2.seconds());
            std::vector<Vec> path;
            std::vector<Vec> dirs;
            for (int k = -20; k <= 20; ++k) {
                double s = 0.025 * static_cast<double>(k);
                path.push_back(Vec{s, s * s});
                double nrm = std::sqrt(1 + 4 * s * s);
                dirs.push_back(Vec{-2 * s / nrm, 1 / nrm});
            }
            violations += radius_continuity_scan(tree, path, dirs, h, cloud.tau_res, r_max)
                              .violations;
        }
        {
            Stopwatch sw3;
            SampledSet cloud = corpus_cloud("ellipse", h);
            KdTree tree(cloud.points);
            LimitingRadius lr1 = limiting_radius(tree, Vec{2.0, 0.0}, h, cloud.tau_res, r_max);
            LimitingRadius lr2 = limiting_radius(tree, Vec{-2.0, 0.0}, h, cloud.tau_res, r_max);
            add_value(ctx, "AC8.ellipse", "radius", 0.5, std::min(lr1.r, lr2.r), 0.05,
                      sw3.seconds());
            std::vector<Vec> path;
            std::vector<Vec> dirs;
            for (int k = 0; k < 64; ++k) {
                double t = kPi * static_cast<double>(k) / 32.0;
                path.push_back(Vec{2 * std::cos(t), std::sin(t)});
                double gx = std::cos(t);  // gradient (x/2, 2y) at the point
                double gy = 2 * std::sin(t);
                double nrm = std::sqrt(gx * gx + gy * gy);
                dirs.push_back(Vec{-gx / nrm, -gy / nrm});
            }
            violations += radius_continuity_scan(tree, path, dirs, h, cloud.tau_res, r_max)
                              .violations;
        }
        add(ctx, "AC8.continuity", "radius", "0 violations",
            fmt(static_cast<double>(violations)) + " violations", "exact", violations == 0, 0);
        double total = sw.seconds();
        add(ctx, "AC8.time", "radius", "< 120 s", fmt(total) + " s", "", total < 120, total);
    } catch (const std::exception& e) {
        add_error(ctx, "AC8", "radius", e.what(), sw.seconds());
    }
}

// --- AC9: cross-implementation consistency --------------------------------

void ac9_nn(Ctx& ctx) {
    Stopwatch sw;
    struct Spec {
        const char* id;
        double h;
    };
    const Spec specs[] = {{"parabola", 0.005}, {"circle", 0.01}, {"cone", 0.05}};
    std::mt19937_64 rng(20240817ULL);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    bool ok = true;
    std::size_t total_pts = 0;
    for (const Spec& s : specs) {
        SampledSet cloud = corpus_cloud(s.id, s.h);
        total_pts += cloud.size();
        ok = ok && cloud.size() <= 5000;
        KdTree tree(cloud.points);
        for (int q = 0; q < 200; ++q) {
            Vec query(cloud.dim());
            for (std::size_t i = 0; i < cloud.dim(); ++i) query[i] = U(rng);
            KdTree::Hit hit = tree.nearest(query);
            std::size_t best = 0;
            double bd = dist2(query, cloud.points[0]);
            for (std::size_t j = 1; j < cloud.size(); ++j) {
                double dj = dist2(query, cloud.points[j]);
                if (dj < bd || (dj == bd && lex_less(cloud.points[j], cloud.points[best]))) {
                    bd = dj;
                    best = j;
                }
            }
            ok = ok && hit.index == best;
        }
    }
    add(ctx, "AC9.nn_equiv", "consistency", "kd == linear scan on 600 queries",
        ok ? "all agree (" + fmt(static_cast<double>(total_pts)) + " pts total)" : "mismatch",
        "exact", ok, sw.seconds());
}

void ac9_double_polar(Ctx& ctx) {
    Stopwatch sw;
    struct Spec {
        const char* id;
        double h;
    };
    const Spec specs[] = {{"parabola", 0.005}, {"halfline", 0.005}, {"plane", 0.02}};
    double worst = 0;
    for (const Spec& s : specs) {
        SampledSet cloud = corpus_cloud(s.id, s.h);
        KdTree tree(cloud.points);
        Vec origin(cloud.dim());
        ConeEstimate cone = estimate_tangent_cone(tree, origin, s.h);
        std::vector<Vec> polar1 = polar_cone(cone.directions, cloud.dim());
        std::vector<Vec> polar2 = polar_cone(polar1, cloud.dim());
        worst = std::max(worst, directed_angular_hausdorff(cone.directions, polar2));
    }
    add(ctx, "AC9.double_polar", "consistency", "cone within 0.2 rad of its double polar",
        fmt(worst) + " rad", "0.2", worst <= 0.2, sw.seconds());
}

void ac9_lipschitz(Ctx& ctx) {
    Stopwatch sw;
    SampledSet cloud = corpus_cloud("parabola", 0.01);
    KdTree tree(cloud.points);
    std::mt19937_64 rng(555ULL);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        Vec x{U(rng), U(rng)};
        Vec y{U(rng), U(rng)};
        double excess =
            std::fabs(distance_to_set(tree, x) - distance_to_set(tree, y)) - dist(x, y);
        worst = std::max(worst, excess);
    }
    add(ctx, "AC9.lipschitz", "consistency", "|d(x) - d(y)| <= |x - y| on 10000 pairs",
        "max excess " + fmt(worst), "1e-9", worst <= 1e-9, sw.seconds());
}

void ac9_scaling(Ctx& ctx) {
    Stopwatch sw;
    struct Spec {
        const char* id;
        double h;
        DomainBox region;
        double spacing;
    };
    Spec specs[] = {
        {"two_points", 0.05, DomainBox::cube(2, -0.4, 0.4), 0.1},
        {"parabola", 0.01, DomainBox{{{-0.25, 0.25}, {0.25, 0.75}}}, 0.0625},
    };
    bool ok = true;
    std::size_t compared = 0;
    for (const Spec& s : specs) {
        SampledSet cloud = corpus_cloud(s.id, s.h);
        KdTree tree(cloud.points);
        MedialScanConfig mc;
        mc.region = s.region;
        mc.spacing = s.spacing;
        std::vector<MedialPoint> base = detect_medial_points(cloud, tree, mc);
        ok = ok && !base.empty();
        for (double lambda : {0.5, 2.0}) {
            SampledSet scaled = scale_sampled(cloud, lambda);
            KdTree stree(scaled.points);
            MedialScanConfig smc;
            smc.region = s.region.scaled(lambda);
            smc.spacing = s.spacing * lambda;
            std::vector<MedialPoint> got = detect_medial_points(scaled, stree, smc);
            ok = ok && got.size() == base.size();
            if (got.size() != base.size()) continue;
            for (std::size_t i = 0; i < base.size(); ++i) {
                for (std::size_t c = 0; c < base[i].location.size(); ++c)
                    ok = ok && got[i].location[c] == lambda * base[i].location[c];
                ok = ok && got[i].d == lambda * base[i].d;
                ok = ok && got[i].theta_sep == base[i].theta_sep;
                ++compared;
            }
        }
    }
    add(ctx, "AC9.scaling", "consistency", "detections commute with scaling bit-exactly",
        ok ? "exact over " + fmt(static_cast<double>(compared)) + " detections" : "mismatch",
        "exact", ok, sw.seconds());
}

void ac9_hausdorff(Ctx& ctx) {
    Stopwatch sw;
    struct Spec {
        const char* id;
        double h;
        double fine_h;
        DomainBox box;
    };
    Spec specs[] = {
        {"parabola", 0.01, 0.005, DomainBox{{{-0.3, 0.3}, {0.0, 1.0}}}},
        {"cusp", 0.001, 0.0005, DomainBox{{{-0.05, 0.05}, {0.0, 0.15}}}},
        {"circle", 0.01, 0.005, DomainBox::cube(2, -0.5, 0.5)},
        {"ellipse", 0.01, 0.005, DomainBox{{{-1.3, 1.3}, {-0.5, 0.5}}}},
        {"two_points", 0.05, 0.02, DomainBox::cube(2, -0.4, 0.4)},
        {"x2sgnx", 0.01, 0.005, DomainBox{{{-0.3, 0.3}, {-1.0, 1.0}}}},
        {"halfline", 0.01, 0.005, DomainBox::cube(2, -0.3, 0.3)},
        {"cross", 0.01, 0.005, DomainBox::cube(2, -0.3, 0.3)},
    };
    bool ok = true;
    double worst_ratio = 0;
    std::string worst_id = "-";
    for (const Spec& s : specs) {
        const SetDescriptor& desc = corpus_entry(s.id).descriptor;
        SampledSet cloud = corpus_cloud(s.id, s.h);
        KdTree tree(cloud.points);
        MedialScanConfig mc;
        mc.region = s.box;
        mc.spacing = s.h;
        std::vector<MedialPoint> pipe = detect_medial_points(cloud, tree, mc);
        std::vector<OracleMedialPoint> oracle = oracle_bruteforce_medial(desc, s.box, s.fine_h);
        if (std::string(s.id) == "halfline") {
            ok = ok && pipe.empty() && oracle.empty();
            continue;
        }
        if (pipe.empty() || oracle.empty()) {
            ok = false;
            worst_id = s.id;
            continue;
        }
        double hd = 0;
        for (const MedialPoint& p : pipe) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const OracleMedialPoint& o : oracle)
                nearest = std::min(nearest, dist(p.location, o.node));
            hd = std::max(hd, nearest);
        }
        double ratio = hd / (3 * s.fine_h);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_id = s.id;
        }
        ok = ok && hd <= 3 * s.fine_h;
    }
    add(ctx, "AC9.hausdorff", "consistency", "one-sided Hausdorff <= 3 fine_h on 8 planar sets",
        "worst " + fmt(worst_ratio) + " of budget (" + worst_id + ")", "exact", ok, sw.seconds());
}

void ac9(Ctx& ctx) {
    if (!group_selected(ctx, "AC9", {"consistency"})) return;
    Stopwatch sw;
    try {
        ac9_nn(ctx);
        ac9_double_polar(ctx);
        ac9_lipschitz(ctx);
        ac9_scaling(ctx);
        ac9_hausdorff(ctx);
        double total = sw.seconds();
        add(ctx, "AC9.time", "consistency", "< 600 s", fmt(total) + " s", "", total < 600, total);
    } catch (const std::exception& e) {
        add_error(ctx, "AC9", "consistency", e.what(), sw.seconds());
    }
}

}  // namespace

VerifyResult run_verify(const std::string& filter, bool self_test_perturb) {
    VerifyResult result;
    Ctx ctx;
    ctx.filter = filter;
    ctx.perturb = self_test_perturb;
    ctx.out = &result;
    Stopwatch sw;
    ac1(ctx);
    ac2(ctx);
    ac3(ctx);
    ac4(ctx);
    ac5(ctx);
    ac6(ctx);
    ac7(ctx);
    ac8(ctx);
    ac9(ctx);
    result.total_s = sw.seconds();
    if (filter.empty())
        add(ctx, "total.time", "", "< 600 s", fmt(result.total_s) + " s", "",
            result.total_s < 600, result.total_s);
    return result;
}

void print_verify(const VerifyResult& r, std::ostream& out) {
    std::size_t passed = 0;
    for (const VerifyRow& row : r.rows) {
        out << (row.pass ? "[PASS] " : "[FAIL] ") << row.id << "  expected " << row.expected
            << "  observed " << row.observed;
        if (!row.tolerance.empty()) out << "  tol " << row.tolerance;
        if (row.elapsed_s > 0) out << "  (" << static_cast<int>(row.elapsed_s * 1000) << " ms)";
        out << "\n";
        if (row.pass) ++passed;
    }
    out << passed << "/" << r.rows.size() << " checks passed in " << fmt(r.total_s) << " s\n";
}

}  // namespace medialkit
