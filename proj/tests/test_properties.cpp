#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "medialkit/corpus.hpp"
#include "medialkit/medial_axis.hpp"
#include "medialkit/reaching_radius.hpp"
#include "medialkit/report.hpp"
#include "medialkit/superquadracity.hpp"
#include "medialkit/verify.hpp"

using namespace medialkit;

namespace {

SamplingConfig config(double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    return cfg;
}

SampledSet sampled(const std::string& id, double h) {
    return sample_set(corpus_entry(id).descriptor, config(h));
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("distance to the cloud is 1-Lipschitz") {
    SampledSet s = sampled("parabola", 0.01);
    KdTree tree(s.points);
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec a{u(rng), u(rng)};
        Vec b{u(rng), u(rng)};
        double excess =
            std::fabs(distance_to_set(tree, a) - distance_to_set(tree, b)) - dist(a, b);
        worst = std::max(worst, excess);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("stored residuals honor the declared bound") {
    std::mt19937_64 rng(777);
    for (const char* id : {"parabola", "circle", "cusp", "trabka_gamma", "cubic_curve_3d"}) {
        CAPTURE(id);
        SampledSet s = sampled(id, 0.05);
        CHECK(s.tau_res <= 0.05 / 10 + 1e-15);
        const SetDescriptor& d = s.descriptor;
        std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
        for (int k = 0; k < 200; ++k) {
            std::size_t i = pick(rng);
            CHECK(s.residuals[i] <= s.tau_res + 1e-15);
            // The residual scan for parametric curves is itself approximate.
            double slack = d.kind == SetKind::ParametricCurve ? 1e-6 : 1e-12;
            CHECK(membership_residual(d, s.points[i]) <= s.residuals[i] + slack);
        }
    }
}

TEST_CASE("medial detection commutes with dyadic scaling bit for bit") {
    SampledSet base = sampled("two_points", 0.05);
    KdTree base_tree(base.points);
    MedialScanConfig cfg;
    cfg.region = DomainBox::cube(2, -0.4, 0.4);
    cfg.spacing = 0.1;
    std::vector<MedialPoint> base_pts = detect_medial_points(base, base_tree, cfg);
    REQUIRE(!base_pts.empty());

    for (double lambda : {0.5, 2.0}) {
        CAPTURE(lambda);
        SampledSet scaled = scale_sampled(base, lambda);
        KdTree scaled_tree(scaled.points);
        MedialScanConfig scfg;
        scfg.region = cfg.region.scaled(lambda);
        scfg.spacing = cfg.spacing * lambda;
        std::vector<MedialPoint> got = detect_medial_points(scaled, scaled_tree, scfg);
        REQUIRE(got.size() == base_pts.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(got[i].location[k] == lambda * base_pts[i].location[k]);
            CHECK(got[i].d == lambda * base_pts[i].d);
            CHECK(got[i].theta_sep == base_pts[i].theta_sep);
        }
    }
}

TEST_CASE("growth exponent is scale invariant, the coefficient is not") {
    SampledSet base = sampled("cusp", 4e-4);
    KdTree base_tree(base.points);
    SuperquadracityAnalysis a = project_and_classify(base_tree, Vec{0, 0}, 4e-4, 1e-12);
    REQUIRE(a.superquadratic);

    SampledSet big = scale_sampled(base, 2.0);
    KdTree big_tree(big.points);
    SuperquadracityAnalysis b = project_and_classify(big_tree, Vec{0, 0}, 8e-4, 1e-12);
    CHECK(b.superquadratic);
    CHECK(b.fit.alpha == doctest::Approx(a.fit.alpha).epsilon(1e-3));
    // g(eps) = a eps^alpha turns into a lambda^(1-alpha) eps^alpha.
    double expected = std::pow(2.0, 1.0 - a.fit.alpha);
    CHECK(b.fit.coefficient / a.fit.coefficient == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("medial detection commutes with rotation") {
    SampledSet base = sampled("two_points", 0.05);
    KdTree base_tree(base.points);
    MedialScanConfig cfg;
    cfg.region = DomainBox::cube(2, -0.4, 0.4);
    cfg.spacing = 0.1;
    std::vector<MedialPoint> base_pts = detect_medial_points(base, base_tree, cfg);

    SampledSet rot = rotate_sampled(base, {{0.0, -1.0}, {1.0, 0.0}});
    KdTree rot_tree(rot.points);
    std::vector<MedialPoint> rot_pts = detect_medial_points(rot, rot_tree, cfg);
    REQUIRE(rot_pts.size() == base_pts.size());
    for (const MedialPoint& p : base_pts) {
        Vec image{-p.location[1], p.location[0]};
        double best = 1e9;
        for (const MedialPoint& q : rot_pts) best = std::min(best, dist(q.location, image));
        CHECK(best <= 1e-9);
    }
}

TEST_CASE("superquadratic growth pierces tangent balls, quadratic growth does not") {
    SampledSet cusp = sampled("cusp", 4e-4);
    KdTree cusp_tree(cusp.points);
    SuperquadracityAnalysis a = project_and_classify(cusp_tree, Vec{0, 0}, 4e-4, 1e-12);
    REQUIRE(a.superquadratic);
    BallProbe probe = ball_tangency_probe(cusp_tree, a.frame, 4e-4, cusp.tau_res);
    bool some_direction_pierced_everywhere = false;
    for (const BallProbeDirection& dir : probe.directions) {
        bool all_pierced = true;
        for (std::uint8_t f : dir.fits) all_pierced = all_pierced && f == 0;
        some_direction_pierced_everywhere = some_direction_pierced_everywhere || all_pierced;
    }
    CHECK(some_direction_pierced_everywhere);

    SampledSet par = sampled("parabola", 4e-4);
    KdTree par_tree(par.points);
    SuperquadracityAnalysis b = project_and_classify(par_tree, Vec{0, 0}, 4e-4, 1e-12);
    REQUIRE_FALSE(b.superquadratic);
    BallProbe pprobe = ball_tangency_probe(par_tree, b.frame, 4e-4, par.tau_res);
    for (const BallProbeDirection& dir : pprobe.directions) {
        bool some_fit = false;
        for (std::uint8_t f : dir.fits) some_fit = some_fit || f == 1;
        CHECK(some_fit);
    }
}

TEST_CASE("limiting radius vanishes exactly where reach holds") {
    SampledSet cusp = sampled("cusp", 0.005);
    KdTree cusp_tree(cusp.points);
    LimitingRadius rc = limiting_radius(cusp_tree, Vec{0, 0}, 0.005, cusp.tau_res, 3.0);
    CHECK(rc.r < 0.2);
    ReachAnalysis cra = detect_reach(corpus_entry("cusp").descriptor, config(0.02), Vec{0, 0});
    CHECK(cra.verdict == ReachVerdict::Reached);

    SampledSet par = sampled("parabola", 0.005);
    KdTree par_tree(par.points);
    LimitingRadius rp = limiting_radius(par_tree, Vec{0, 0}, 0.005, par.tau_res, 3.0);
    CHECK(rp.r > 0.2);
    ReachAnalysis pra = detect_reach(corpus_entry("parabola").descriptor, config(0.02), Vec{0, 0});
    CHECK(pra.verdict == ReachVerdict::Separated);
}

TEST_CASE("reports are byte-identical across reruns") {
    auto build = [] {
        SampledSet s = sampled("two_points", 0.05);
        KdTree tree(s.points);
        AnalysisReport r;
        r.command = "analyze";
        r.params["set"] = "corpus:two_points";
        r.params["h"] = 0.05;
        r.results["basins"] = basin_json(analyze_basins(tree, Vec{0, 0}, 0.05, s.tau_res));
        r.results["near"] = near_json(near_set(tree, Vec{0, 0}, 0.12, 0.05));
        SampledSet curve = sampled("parabola", 0.02);
        KdTree curve_tree(curve.points);
        r.results["cone"] =
            cone_criterion_json(tangent_cone_criterion(curve_tree, Vec{0, 0}, 0.02));
        r.timestamp = "varies";
        r.elapsed_s = 0.123;
        std::ostringstream out;
        write_report(r, out, false);
        return out.str();
    };
    std::string first = build();
    std::string second = build();
    CHECK(first == second);
    CHECK(first.find("timestamp") == std::string::npos);
    CHECK(first.find("meta") == std::string::npos);
}

TEST_CASE("acceptance self-test trips on a perturbed expectation") {
    VerifyResult r = run_verify("AC1", true);
    REQUIRE(!r.rows.empty());
    CHECK_FALSE(r.all_pass);
    bool some_pass = false, some_fail = false;
    for (const VerifyRow& row : r.rows) {
        CHECK(!row.id.empty());
        some_pass = some_pass || row.pass;
        some_fail = some_fail || !row.pass;
    }
    CHECK(some_pass);
    CHECK(some_fail);
}

}  // TEST_SUITE
