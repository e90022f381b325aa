#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "medialkit/corpus.hpp"

using namespace medialkit;

namespace {

DomainBox box2(double xlo, double xhi, double ylo, double yhi) {
    DomainBox b;
    b.axes = {{xlo, xhi}, {ylo, yhi}};
    return b;
}

}  // namespace

TEST_SUITE("corpus_oracle") {

TEST_CASE("corpus inventory") {
    const std::vector<CorpusEntry>& all = corpus();
    REQUIRE(all.size() == 17);
    CHECK(std::is_sorted(all.begin(), all.end(),
                         [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; }));
    const char* expected[] = {"circle",  "cone",        "cross",    "cubic_curve_3d", "cusp",
                              "ellipse", "ghomi",       "halfline", "kontrsuperq",    "parabola",
                              "plane",   "sphere",      "sq_curve_3d", "trabka",
                              "trabka_gamma", "two_points", "x2sgnx"};
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].id == expected[i]);
        CHECK(!all[i].summary.empty());
        CHECK(!all[i].interest_points.empty());
        for (const CorpusExpectation& ex : all[i].expectations) {
            CHECK(!ex.quantity.empty());
            CHECK(!ex.basis.empty());
            CHECK(ex.tol > 0);
        }
        validate_descriptor(all[i].descriptor);
        for (const Vec& p : all[i].interest_points)
            CHECK(p.size() == all[i].descriptor.ambient_dim);
    }
    CHECK(corpus_entry("cusp").id == "cusp");
    CHECK_THROWS_AS(corpus_entry("no_such_set"), CorpusError);
}

TEST_CASE("set argument resolution") {
    SetDescriptor d = resolve_set_argument("corpus:parabola");
    CHECK(d.kind == SetKind::Graph);
    CHECK(d.ambient_dim == 2);
    CHECK_THROWS_AS(resolve_set_argument("corpus:no_such_set"), CorpusError);

    std::filesystem::path path =
        std::filesystem::temp_directory_path() / "medialkit_oracle_arg.json";
    {
        std::ofstream out(path);
        out << descriptor_to_json(make_implicit("x^2 + y^2 - 1", 2, DomainBox::cube(2, -1.2, 1.2)))
                   .dump()
            << "\n";
    }
    SetDescriptor f = resolve_set_argument(path.string());
    CHECK(f.kind == SetKind::Implicit);
    std::filesystem::remove(path);

    CHECK_THROWS(resolve_set_argument("/nonexistent/medialkit.json"));
}

TEST_CASE("oracle: point pair bisector is exact") {
    std::vector<OracleMedialPoint> pts = oracle_bruteforce_medial(
        corpus_entry("two_points").descriptor, DomainBox::cube(2, -0.4, 0.4), 0.05);
    REQUIRE(!pts.empty());
    for (const OracleMedialPoint& p : pts) {
        CHECK(std::fabs(p.node[0]) <= 1e-12);
        CHECK(p.d == doctest::Approx(std::sqrt(1 + p.node[1] * p.node[1])));
        CHECK(p.theta_sep > 2.0);
    }
}

TEST_CASE("oracle: parabola branch starts at the focal point") {
    std::vector<OracleMedialPoint> pts = oracle_bruteforce_medial(
        corpus_entry("parabola").descriptor, box2(-0.3, 0.3, 0.0, 1.0), 0.002);
    REQUIRE(pts.size() >= 100);
    double min_y = 1e9;
    for (const OracleMedialPoint& p : pts) {
        CHECK(std::fabs(p.node[0]) <= 1e-12);  // only the axis column qualifies
        min_y = std::min(min_y, p.node[1]);
    }
    // Onset no earlier than the focal point, censored upward by at most a
    // couple of lattice cells.
    CHECK(min_y == doctest::Approx(0.5).epsilon(0.008));
    CHECK(min_y >= 0.5 - 1e-9);
}

TEST_CASE("oracle: circle center wraps") {
    std::vector<OracleMedialPoint> pts = oracle_bruteforce_medial(
        corpus_entry("circle").descriptor, DomainBox::cube(2, -0.05, 0.05), 0.01);
    REQUIRE(!pts.empty());
    double closest = 1e9;
    for (const OracleMedialPoint& p : pts) {
        closest = std::min(closest, norm(p.node));
        CHECK(norm(p.node) <= 0.016);  // wrap can fatten the center by one cell
        CHECK(p.theta_sep == doctest::Approx(3.14159265358979323846));
    }
    CHECK(closest <= 1e-12);
}

TEST_CASE("oracle: node budget guard") {
    CHECK_THROWS_AS(oracle_bruteforce_medial(corpus_entry("two_points").descriptor,
                                             DomainBox::cube(2, -1.0, 1.0), 1e-5),
                    CorpusError);
}

}  // TEST_SUITE
