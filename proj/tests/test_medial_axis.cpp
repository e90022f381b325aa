#include "doctest.h"

#include <cmath>
#include <sstream>

#include "medialkit/corpus.hpp"
#include "medialkit/medial_axis.hpp"
#include "medialkit/sampling.hpp"

using namespace medialkit;

namespace {

constexpr double kPi = 3.14159265358979323846;

SamplingConfig config(double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    return cfg;
}

struct Cloud {
    SampledSet set;
    KdTree tree;
};

Cloud cloud_for(const std::string& id, double h) {
    Cloud c;
    c.set = sample_set(corpus_entry(id).descriptor, config(h));
    c.tree = KdTree(c.set.points);
    return c;
}

ReachAnalysis reach_for(const std::string& id, double h) {
    const CorpusEntry& e = corpus_entry(id);
    return detect_reach(e.descriptor, config(h), e.interest_points.front());
}

}  // namespace

TEST_SUITE("medial_axis") {

TEST_CASE("basins of a point pair straddle the bisector") {
    Cloud c = cloud_for("two_points", 0.05);
    BasinAnalysis b = analyze_basins(c.tree, Vec{0, 0}, 0.05, c.set.tau_res);
    CHECK(b.d == doctest::Approx(1.0));
    CHECK(b.member_count == 2);
    CHECK(b.basin_count == 2);
    CHECK(b.theta_sep == doctest::Approx(kPi));
    CHECK_FALSE(b.wrapped);

    // Off the bisector there is one foot, hence one basin.
    BasinAnalysis off = analyze_basins(c.tree, Vec{0.3, 0}, 0.05, c.set.tau_res);
    CHECK(off.basin_count == 1);
    CHECK(off.theta_sep == 0.0);
}

TEST_CASE("full-ring feet wrap") {
    Cloud c = cloud_for("circle", 0.01);
    BasinAnalysis b = analyze_basins(c.tree, Vec{0, 0}, 0.01, c.set.tau_res);
    CHECK(b.d == doctest::Approx(1.0).epsilon(0.01));
    CHECK(b.wrapped);
    CHECK(b.theta_sep == doctest::Approx(kPi));

    std::vector<Vec> ring;
    for (int i = 0; i < 64; ++i)
        ring.push_back(Vec{std::cos(2 * kPi * i / 64), std::sin(2 * kPi * i / 64)});
    CHECK(directions_wrap(ring, 2));
    std::vector<Vec> arc(ring.begin(), ring.begin() + 24);
    CHECK_FALSE(directions_wrap(arc, 2));
}

TEST_CASE("point pair scan finds exactly the bisector") {
    Cloud c = cloud_for("two_points", 0.05);
    MedialScanConfig cfg;
    cfg.region = DomainBox::cube(2, -0.4, 0.4);
    cfg.spacing = 0.1;
    std::vector<MedialPoint> pts = detect_medial_points(c.set, c.tree, cfg);
    REQUIRE(!pts.empty());
    for (const MedialPoint& p : pts) {
        CHECK(p.location[0] == 0.0);
        CHECK(p.theta_sep >= kDefaultThetaMin);
        CHECK(p.d == doctest::Approx(std::sqrt(1 + p.location[1] * p.location[1])));
    }
    // All nine bisector nodes of the grid qualify (d > 3h everywhere here).
    CHECK(pts.size() == 9);
}

TEST_CASE("medial csv layout") {
    Cloud c = cloud_for("two_points", 0.05);
    MedialScanConfig cfg;
    cfg.region = DomainBox::cube(2, -0.2, 0.2);
    cfg.spacing = 0.1;
    std::vector<MedialPoint> pts = detect_medial_points(c.set, c.tree, cfg);
    std::ostringstream out;
    write_medial_csv(pts, 2, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,d,theta_sep,level");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == pts.size());
}

TEST_CASE("parabola vertex is separated at the focal distance") {
    ReachAnalysis ra = reach_for("parabola", 0.02);
    CHECK(ra.verdict == ReachVerdict::Separated);
    CHECK(ra.rule == "detection floor stabilized");
    CHECK(ra.levels.size() == 3);
    CHECK(ra.delta_sep > 0.45);
    CHECK(ra.delta_sep < 0.58);
    for (const ReachLevel& lv : ra.levels) {
        CHECK_FALSE(lv.capped);
        CHECK(lv.count > 0);
    }
}

TEST_CASE("cusp is reached via branch extrapolation") {
    ReachAnalysis ra = reach_for("cusp", 0.02);
    CHECK(ra.verdict == ReachVerdict::Reached);
    CHECK(ra.rule == "R2 branch extrapolation");
    CHECK(ra.pool_fit_valid);
    CHECK(ra.c0 <= 5 * 0.005);
    CHECK(ra.gamma > 0.4);
    CHECK(ra.gamma < 1.4);
    REQUIRE(ra.branch_points.size() >= 10);
}

TEST_CASE("trumpet reach at the tip") {
    ReachAnalysis gamma = reach_for("trabka_gamma", 0.08);
    CHECK(gamma.verdict == ReachVerdict::Reached);
    CHECK(gamma.slope == doctest::Approx(2.0 / 3.0).epsilon(0.3));

    ReachAnalysis both = reach_for("trabka", 0.08);
    CHECK(both.verdict == ReachVerdict::Reached);
}

TEST_CASE("segment endpoint sees no medial points at all") {
    ReachAnalysis ra = reach_for("halfline", 0.02);
    CHECK(ra.verdict == ReachVerdict::Separated);
    CHECK(ra.rule == "no medial points within reach");
    for (const ReachLevel& lv : ra.levels) {
        CHECK(lv.capped);
        CHECK(lv.count == 0);
    }
}

TEST_CASE("inflection point is separated despite the sign flip") {
    ReachAnalysis ra = reach_for("x2sgnx", 0.02);
    CHECK(ra.verdict == ReachVerdict::Separated);
    CHECK(ra.delta_sep == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("cusp floor profile shrinks like a power of h") {
    const CorpusEntry& e = corpus_entry("cusp");
    MedialProfile mp = medial_profile(e.descriptor, config(0.02), Vec{0, 0});
    REQUIRE(mp.h_levels.size() == 3);
    REQUIRE(mp.delta.size() == 3);
    CHECK(mp.delta[2] < mp.delta[0]);
    CHECK(mp.slope > 0.2);
    CHECK(mp.slope < 1.2);
}

}  // TEST_SUITE
