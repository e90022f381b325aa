#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "medialkit/proximity.hpp"
#include "medialkit/sampling.hpp"

using namespace medialkit;

namespace {

DomainBox box1(double lo, double hi) {
    DomainBox b;
    b.axes = {{lo, hi}};
    return b;
}

SamplingConfig config(double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    return cfg;
}

double coverage_gap(const SampledSet& s, const std::vector<Vec>& dense) {
    KdTree tree(s.points);
    double worst = 0;
    for (const Vec& p : dense) worst = std::max(worst, tree.nearest(p).dist);
    return worst;
}

}  // namespace

TEST_SUITE("sampling") {

TEST_CASE("graph cloud covers the curve at spacing h") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SampledSet s = sample_set(d, config(0.02));
    REQUIRE(s.size() > 20);
    CHECK(s.h == 0.02);
    CHECK(s.tau_res == 0.0);  // graphs are evaluated exactly
    for (double r : s.residuals) CHECK(r == 0.0);

    CHECK(std::is_sorted(s.points.begin(), s.points.end(), lex_less));

    std::vector<Vec> dense;
    for (int i = 0; i <= 800; ++i) {
        double x = -0.5 + i / 800.0;
        dense.push_back(graph_point(d, Vec{x}));
    }
    CHECK(coverage_gap(s, dense) <= 0.02);

    // Deduplication keeps points apart.
    for (std::size_t i = 1; i < s.size(); ++i)
        CHECK(dist(s.points[i - 1], s.points[i]) > 0.02 / 8);
}

TEST_CASE("residual gate rejects loose configs") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SamplingConfig cfg = config(0.01);
    cfg.tau_res = 0.01;  // > h/10
    CHECK_THROWS_AS(sample_set(d, cfg), SamplingError);
    cfg.tau_res = 1e-3;
    CHECK_NOTHROW(sample_set(d, cfg));
}

TEST_CASE("implicit sampling meets the residual bound") {
    SetDescriptor d = make_implicit("x^2 + y^2 - 1", 2, DomainBox::cube(2, -1.3, 1.3));
    SamplingConfig cfg = config(0.02);
    SampledSet s = sample_set(d, cfg);
    REQUIRE(s.size() > 100);
    CHECK(s.tau_res <= cfg.tau_res);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s.residuals[i] <= cfg.tau_res);
        CHECK(std::fabs(membership_residual(d, s.points[i])) == doctest::Approx(s.residuals[i]));
    }

    std::vector<Vec> dense;
    for (int i = 0; i < 1000; ++i) {
        double t = 2 * 3.14159265358979323846 * i / 1000.0;
        dense.push_back(Vec{std::cos(t), std::sin(t)});
    }
    CHECK(coverage_gap(s, dense) <= 0.02);
}

TEST_CASE("parametric sampling covers the curve") {
    SetDescriptor d = make_parametric({"t", "t^2", "t^3"}, 3, -0.5, 0.5);
    SampledSet s = sample_set(d, config(0.02));
    std::vector<Vec> dense;
    for (int i = 0; i <= 1000; ++i) dense.push_back(parametric_point(d, -0.5 + i / 1000.0));
    CHECK(coverage_gap(s, dense) <= 0.02);
    for (double r : s.residuals) CHECK(r == 0.0);
}

TEST_CASE("boundary flags mark clipped points") {
    double h = 0.02;
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SampledSet s = sample_set(d, config(h));
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double x = s.points[i][0];
        if (s.boundary_flags[i]) {
            ++flagged;
            CHECK(std::fabs(x) > 0.5 - 3 * h);
        } else {
            CHECK(std::fabs(x) < 0.5 - h);
        }
    }
    CHECK(flagged >= 2);  // both clipped ends
    CHECK(flagged < s.size() / 4);
}

TEST_CASE("union clouds carry member tags") {
    SetDescriptor a = make_graph({"1 - x^2"}, 2, box1(-0.5, 0.5));
    SetDescriptor b = make_graph({"x^2 - 1"}, 2, box1(-0.5, 0.5));
    SampledSet s = sample_set(make_union({a, b}), config(0.05));
    bool saw0 = false, saw1 = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.member_tags[i] == 0) saw0 = true;
        if (s.member_tags[i] == 1) saw1 = true;
        double y = s.points[i][1];
        CHECK(std::fabs(std::fabs(y) - (1 - s.points[i][0] * s.points[i][0])) < 1e-12);
    }
    CHECK(saw0);
    CHECK(saw1);
    CHECK(std::is_sorted(s.points.begin(), s.points.end(), lex_less));
}

TEST_CASE("refinement ladder halves the spacing") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SamplingConfig cfg = config(0.04);
    cfg.ladder_depth = 3;
    std::vector<SampledSet> ladder = refinement_ladder(d, cfg);
    REQUIRE(ladder.size() == 3);
    CHECK(ladder[0].h == 0.04);
    CHECK(ladder[1].h == 0.02);
    CHECK(ladder[2].h == 0.01);
    CHECK(ladder[0].size() < ladder[1].size());
    CHECK(ladder[1].size() < ladder[2].size());
}

TEST_CASE("scaling transforms the cloud exactly") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SampledSet s = sample_set(d, config(0.02));
    SampledSet t = scale_sampled(s, 2.0);
    REQUIRE(t.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(t.points[i][0] == 2.0 * s.points[i][0]);
        CHECK(t.points[i][1] == 2.0 * s.points[i][1]);
    }
    CHECK(t.h == 0.04);
    CHECK(t.box.lo(0) == -1.0);
    CHECK_THROWS_AS(scale_sampled(s, 0.0), SamplingError);
}

TEST_CASE("rotation preserves the metric") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-0.5, 0.5));
    SampledSet s = sample_set(d, config(0.02));
    SampledSet r = rotate_sampled(s, {{0.0, -1.0}, {1.0, 0.0}});
    REQUIRE(r.size() == s.size());
    CHECK(r.descriptor.kind == SetKind::PointSet);
    // 90 degree rotation with exact matrix entries is bit-exact.
    KdTree orig(s.points);
    for (const Vec& p : r.points) {
        Vec back{p[1], -p[0]};
        CHECK(orig.nearest(back).dist == 0.0);
    }
    CHECK_THROWS_AS(rotate_sampled(s, {{1.0, 0.0}}), SamplingError);
}

TEST_CASE("csv layout") {
    SetDescriptor d = make_points({Vec{0.25, -1.0}, Vec{-0.5, 2.0}}, DomainBox::cube(2, -2, 2));
    SampledSet s = sample_set(d, config(0.05));
    std::ostringstream out;
    write_csv(s, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,residual,member_tag");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == s.size());
    CHECK(out.str().find("0.25") != std::string::npos);
}

}  // TEST_SUITE
