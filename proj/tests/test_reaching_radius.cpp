#include "doctest.h"

#include <cmath>

#include "medialkit/corpus.hpp"
#include "medialkit/reaching_radius.hpp"
#include "medialkit/sampling.hpp"

using namespace medialkit;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Cloud {
    SampledSet set;
    KdTree tree;
};

Cloud cloud_for(const std::string& id, double h) {
    SamplingConfig cfg;
    cfg.h = h;
    cfg.tau_res = h / 10;
    Cloud c;
    c.set = sample_set(corpus_entry(id).descriptor, cfg);
    c.tree = KdTree(c.set.points);
    return c;
}

}  // namespace

TEST_SUITE("reaching_radius") {

TEST_CASE("circle: tangent ball grows to the center") {
    Cloud c = cloud_for("circle", 0.005);
    RadiusSample inward =
        directional_radius(c.tree, Vec{1, 0}, Vec{-1, 0}, 0.005, c.set.tau_res, 3.0);
    CHECK(inward.normal_dir);
    CHECK(inward.monotone);
    CHECK_FALSE(inward.capped);
    CHECK(inward.r == doctest::Approx(1.0).epsilon(0.05));

    // Outward the complement is empty all the way to the cap.
    RadiusSample outward =
        directional_radius(c.tree, Vec{1, 0}, Vec{1, 0}, 0.005, c.set.tau_res, 3.0);
    CHECK(outward.capped);
    CHECK(outward.r == doctest::Approx(3.0));

    // Tangential directions are rejected by the normal-cone gate.
    RadiusSample tangential =
        directional_radius(c.tree, Vec{1, 0}, Vec{0, 1}, 0.005, c.set.tau_res, 3.0);
    CHECK_FALSE(tangential.normal_dir);
    CHECK(tangential.r == 0.0);

    LimitingRadius lim = limiting_radius(c.tree, Vec{1, 0}, 0.005, c.set.tau_res, 3.0);
    CHECK(lim.samples > 0);
    REQUIRE(!lim.clusters.empty());
    CHECK(lim.r == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("parabola vertex: osculating radius 1/2") {
    Cloud c = cloud_for("parabola", 0.005);
    RadiusSample up = directional_radius(c.tree, Vec{0, 0}, Vec{0, 1}, 0.005, c.set.tau_res, 3.0);
    CHECK(up.normal_dir);
    CHECK(up.r == doctest::Approx(0.5).epsilon(0.1));

    LimitingRadius lim = limiting_radius(c.tree, Vec{0, 0}, 0.005, c.set.tau_res, 3.0);
    CHECK(lim.r == doctest::Approx(0.5).epsilon(0.1));
    CHECK(lim.bands.size() >= 2);
    for (std::size_t i = 1; i < lim.bands.size(); ++i) CHECK(lim.bands[i] < lim.bands[i - 1]);
}

TEST_CASE("ellipse vertex: evolute cusp at b^2/a") {
    Cloud c = cloud_for("ellipse", 0.005);
    LimitingRadius lim = limiting_radius(c.tree, Vec{2, 0}, 0.005, c.set.tau_res, 3.0);
    CHECK(lim.r == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("space curve and sphere radii") {
    Cloud curve = cloud_for("cubic_curve_3d", 0.005);
    LimitingRadius clim = limiting_radius(curve.tree, Vec{0, 0, 0}, 0.005, curve.set.tau_res, 3.0);
    CHECK(clim.r == doctest::Approx(0.5).epsilon(0.15));

    Cloud sphere = cloud_for("sphere", 0.03);
    LimitingRadius slim =
        limiting_radius(sphere.tree, Vec{1, 0, 0}, 0.03, sphere.set.tau_res, 3.0);
    CHECK(slim.r == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("segment endpoint: empty balls everywhere off the line") {
    Cloud c = cloud_for("halfline", 0.005);
    RadiusSample up = directional_radius(c.tree, Vec{-0.5, 0}, Vec{0, 1}, 0.005, c.set.tau_res, 2.0);
    CHECK(up.normal_dir);
    CHECK(up.capped);  // nothing above the segment ever pierces the ball
    RadiusSample along =
        directional_radius(c.tree, Vec{-0.5, 0}, Vec{1, 0}, 0.005, c.set.tau_res, 2.0);
    CHECK_FALSE(along.normal_dir);
}

TEST_CASE("radius is continuous along the circle") {
    Cloud c = cloud_for("circle", 0.005);
    std::vector<Vec> path;
    std::vector<Vec> dirs;
    for (int k = 0; k < 32; ++k) {
        double t = 2 * kPi * k / 32;
        path.push_back(Vec{std::cos(t), std::sin(t)});
        dirs.push_back(Vec{-std::cos(t), -std::sin(t)});
    }
    ContinuityScan scan = radius_continuity_scan(c.tree, path, dirs, 0.005, c.set.tau_res, 3.0);
    REQUIRE(scan.radii.size() == path.size());
    CHECK(scan.violations == 0);
    for (double r : scan.radii) CHECK(r == doctest::Approx(1.0).epsilon(0.05));
}

}  // TEST_SUITE
