#include "doctest.h"

#include <cmath>
#include <vector>

#include "medialkit/cones.hpp"
#include "medialkit/corpus.hpp"
#include "medialkit/sampling.hpp"

using namespace medialkit;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec> ring(int count) {
    std::vector<Vec> dirs;
    for (int i = 0; i < count; ++i) {
        double t = 2 * kPi * i / count;
        dirs.push_back(Vec{std::cos(t), std::sin(t)});
    }
    return dirs;
}

KdTree cloud_for(const std::string& id, double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    return KdTree(sample_set(corpus_entry(id).descriptor, cfg).points);
}

double max_angle_to(const std::vector<Vec>& dirs, const Vec& v) {
    double worst = 0;
    for (const Vec& d : dirs) worst = std::max(worst, angle_between(d, v));
    return worst;
}

}  // namespace

TEST_SUITE("cones") {

TEST_CASE("thinning keeps a spread subset") {
    std::vector<Vec> dirs = ring(100);
    double res = kPi / 16;
    std::vector<Vec> kept = thin_directions(dirs, res);
    REQUIRE(!kept.empty());
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            CHECK(angle_between(kept[i], kept[j]) >= res - 1e-12);
    for (const Vec& d : dirs) {
        double best = kPi;
        for (const Vec& k : kept) best = std::min(best, angle_between(d, k));
        CHECK(best < res + 1e-12);
    }
    // Deterministic: the lex smallest direction always survives.
    std::vector<Vec> sorted = dirs;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    bool found = false;
    for (const Vec& k : kept) found = found || k == sorted.front();
    CHECK(found);
}

TEST_CASE("angular hausdorff distances") {
    std::vector<Vec> a = {Vec{1, 0}};
    std::vector<Vec> b = {Vec{std::cos(0.3), std::sin(0.3)}, Vec{0, 1}};
    CHECK(directed_angular_hausdorff(a, b) == doctest::Approx(0.3));
    CHECK(directed_angular_hausdorff(b, a) == doctest::Approx(kPi / 2));
    CHECK(angular_hausdorff(a, b) == doctest::Approx(kPi / 2));
}

TEST_CASE("tangent cone of a plane fills the equator") {
    KdTree tree = cloud_for("plane", 0.02);
    ConeEstimate cone = estimate_tangent_cone(tree, Vec{0, 0, 0}, 0.02);
    CHECK(cone.stabilized);
    CHECK(cone.drift < kConeStabilityTol);
    REQUIRE(cone.directions.size() >= 8);
    for (const Vec& d : cone.directions) {
        CHECK(std::fabs(d[2]) < 0.1);
        CHECK(norm(d) == doctest::Approx(1.0));
    }
    ConvexityReport conv = is_convex_cone(cone.directions, 3);
    CHECK(conv.convex);
    CHECK(conv.subspace_dim == 2);
}

TEST_CASE("tangent cone of a segment endpoint is one ray") {
    // The corpus halfline is the segment [-1, 0], so the endpoint ray points
    // in the -x direction.
    KdTree tree = cloud_for("halfline", 0.005);
    ConeEstimate cone = estimate_tangent_cone(tree, Vec{0, 0}, 0.005);
    CHECK(cone.stabilized);
    REQUIRE(!cone.directions.empty());
    CHECK(max_angle_to(cone.directions, Vec{-1, 0}) < kPi / 32);
    CHECK(is_convex_cone(cone.directions, 2).convex);
}

TEST_CASE("scale floor is enforced") {
    KdTree tree = cloud_for("halfline", 0.005);
    CHECK_THROWS_AS(estimate_tangent_cone(tree, Vec{0, 0}, 0.005, {0.04, 0.02}), ConeError);
    CHECK_NOTHROW(estimate_tangent_cone(tree, Vec{0, 0}, 0.005, {0.08, 0.06}));
}

TEST_CASE("convexity of explicit direction sets") {
    // Two orthogonal rays span a nonconvex cone: the bisector is missing.
    ConvexityReport quarter = is_convex_cone({Vec{1, 0}, Vec{0, 1}}, 2);
    CHECK_FALSE(quarter.convex);
    CHECK(quarter.witness_gap > 0.1);

    // A full line is convex.
    CHECK(is_convex_cone({Vec{-1, 0}, Vec{1, 0}}, 2).convex);
    CHECK(is_convex_cone({Vec{-1, 0}, Vec{1, 0}}, 2).subspace_dim == 1);

    // A dense ring spans the whole plane: convex.
    ConvexityReport full = is_convex_cone(ring(128), 2);
    CHECK(full.convex);
    CHECK(full.subspace_dim == 2);
}

TEST_CASE("polar cone of a ray is the opposite halfspace") {
    std::vector<Vec> polar = polar_cone({Vec{1, 0}}, 2);
    REQUIRE(!polar.empty());
    bool saw_neg_x = false, saw_up = false, saw_down = false;
    for (const Vec& w : polar) {
        CHECK(dot(w, Vec{1, 0}) <= 0.05 + 1e-12);
        saw_neg_x = saw_neg_x || w[0] < -0.99;
        saw_up = saw_up || w[1] > 0.99;
        saw_down = saw_down || w[1] < -0.99;
    }
    CHECK(saw_neg_x);
    CHECK(saw_up);
    CHECK(saw_down);

    // The polar of the full plane is trivial.
    CHECK(polar_cone(ring(128), 2).empty());
}

TEST_CASE("cross center: nonconvex cone flags the point") {
    KdTree tree = cloud_for("cross", 0.01);
    ConeCriterionResult res = tangent_cone_criterion(tree, Vec{0, 0}, 0.01);
    CHECK(res.cone.stabilized);
    CHECK_FALSE(res.convexity.convex);
    CHECK(res.verdict == CriterionVerdict::MedialApproaches);
    // All four arms are visible.
    CHECK(res.cone.directions.size() >= 4);
    for (const Vec& axis : {Vec{1, 0}, Vec{-1, 0}, Vec{0, 1}, Vec{0, -1}}) {
        double best = kPi;
        for (const Vec& d : res.cone.directions) best = std::min(best, angle_between(d, axis));
        CHECK(best < 0.1);
    }
}

TEST_CASE("smooth points stay inconclusive") {
    KdTree tree = cloud_for("parabola", 0.01);
    ConeCriterionResult res = tangent_cone_criterion(tree, Vec{0, 0}, 0.01);
    CHECK(res.cone.stabilized);
    CHECK(res.convexity.convex);
    CHECK(res.verdict == CriterionVerdict::Inconclusive);

    // The lower-limit test compares against cones at ring distance ~24h, so
    // curvature costs an angle of order h; h must be small enough that the
    // smooth case sits clearly below the pi/8 separation.
    KdTree fine = cloud_for("parabola", 0.002);
    LiminfResult lim = liminf_criterion(fine, Vec{0, 0}, 0.002);
    CHECK_FALSE(lim.containment_fails);
    CHECK(lim.verdict == CriterionVerdict::Inconclusive);
    CHECK(lim.approach_count > 0);
}

}  // TEST_SUITE
