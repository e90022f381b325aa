#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "medialkit/set_model.hpp"

using namespace medialkit;

namespace {

// Deep structural comparison for round-trip checks.
bool same_descriptor(const SetDescriptor& a, const SetDescriptor& b) {
    if (a.kind != b.kind || a.ambient_dim != b.ambient_dim) return false;
    if (a.exprs.size() != b.exprs.size() || a.guards.size() != b.guards.size()) return false;
    for (std::size_t i = 0; i < a.exprs.size(); ++i)
        if (!struct_equal(a.exprs[i], b.exprs[i])) return false;
    for (std::size_t i = 0; i < a.guards.size(); ++i)
        if (!struct_equal(a.guards[i], b.guards[i])) return false;
    if (a.points != b.points) return false;
    if (a.domain.axes != b.domain.axes) return false;
    if (a.members.size() != b.members.size()) return false;
    for (std::size_t i = 0; i < a.members.size(); ++i)
        if (!same_descriptor(a.members[i], b.members[i])) return false;
    return true;
}

DomainBox box1(double lo, double hi) {
    DomainBox b;
    b.axes = {{lo, hi}};
    return b;
}

}  // namespace

TEST_SUITE("set_model") {

TEST_CASE("domain box geometry") {
    DomainBox b = DomainBox::cube(2, -1.0, 1.0);
    CHECK(b.dim() == 2);
    CHECK(b.lo(0) == -1.0);
    CHECK(b.hi(1) == 1.0);
    CHECK(b.extent(0) == 2.0);
    CHECK(b.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));

    CHECK(b.contains(Vec{0.5, -0.5}));
    CHECK(b.contains(Vec{1.0, 1.0}));  // closed box
    CHECK_FALSE(b.contains(Vec{1.5, 0.0}));
    // Only the first dim() coordinates are checked.
    CHECK(b.contains(Vec{0.0, 0.0, 99.0}));

    DomainBox s = b.scaled(2.0);
    CHECK(s.lo(0) == -2.0);
    CHECK(s.hi(0) == 2.0);
}

TEST_CASE("graph descriptor and evaluation") {
    SetDescriptor d = make_graph({"x^2"}, 2, box1(-1, 1));
    CHECK(d.kind == SetKind::Graph);
    CHECK(d.ambient_dim == 2);
    CHECK(d.base_dim() == 1);
    validate_descriptor(d);

    Vec p = graph_point(d, Vec{0.5});
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.25);
    CHECK(graph_values(d, Vec{-2.0}) == std::vector<double>{4.0});

    CHECK(membership_residual(d, Vec{0.5, 0.25}) == doctest::Approx(0.0));
    CHECK(membership_residual(d, Vec{0.5, 0.35}) == doctest::Approx(0.1));
}

TEST_CASE("implicit descriptor") {
    SetDescriptor d = make_implicit("x^2 + y^2 - 1", 2, DomainBox::cube(2, -1.5, 1.5));
    CHECK(d.kind == SetKind::Implicit);
    CHECK(d.base_dim() == 2);
    validate_descriptor(d);
    CHECK(membership_residual(d, Vec{1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(membership_residual(d, Vec{1.1, 0.0}) == doctest::Approx(0.21));
}

TEST_CASE("parametric descriptor") {
    SetDescriptor d = make_parametric({"t", "t^2", "t^3"}, 3, -2.0, 2.0);
    CHECK(d.kind == SetKind::ParametricCurve);
    CHECK(d.base_dim() == 1);
    validate_descriptor(d);
    Vec p = parametric_point(d, 1.5);
    CHECK(p[0] == 1.5);
    CHECK(p[1] == 2.25);
    CHECK(p[2] == 3.375);
    // Residual is an adaptive scan approximation; exact points land near 0.
    CHECK(membership_residual(d, p) < 1e-4);
}

TEST_CASE("point set and union") {
    SetDescriptor pts =
        make_points({Vec{-1.0, 0.0}, Vec{1.0, 0.0}}, DomainBox::cube(2, -1.5, 1.5));
    CHECK(pts.kind == SetKind::PointSet);
    CHECK(membership_residual(pts, Vec{1.0, 0.0}) == 0.0);
    CHECK(membership_residual(pts, Vec{0.0, 0.0}) == doctest::Approx(1.0));

    SetDescriptor u = make_union({pts, make_graph({"x^2"}, 2, box1(-1, 1))});
    CHECK(u.kind == SetKind::Union);
    CHECK(u.members.size() == 2);
    // Union residual is the min over members.
    CHECK(membership_residual(u, Vec{0.0, 0.0}) == doctest::Approx(0.0));
    CHECK(membership_residual(u, Vec{-1.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("piecewise graph: first matching guard wins") {
    // |x| as two branches; both guards hold at x = 0 and agree there.
    SetDescriptor d = make_piecewise({{"x", "x"}, {"0-x", "0-x"}}, 2, box1(-1, 1));
    CHECK(d.kind == SetKind::PiecewiseGraph);
    validate_descriptor(d);
    CHECK(graph_point(d, Vec{0.5})[1] == 0.5);
    CHECK(graph_point(d, Vec{-0.5})[1] == 0.5);
    CHECK(graph_point(d, Vec{0.0})[1] == 0.0);
    CHECK(membership_residual(d, Vec{-0.25, 0.25}) == doctest::Approx(0.0));
}

TEST_CASE("piecewise validation catches gaps and mismatched seams") {
    // Guard covers only x >= 0.5.
    CHECK_THROWS_AS(make_piecewise({{"x - 0.5", "x"}}, 2, box1(-1, 1)), DescriptorError);
    // Branches disagree at the seam x = 0.
    CHECK_THROWS_AS(make_piecewise({{"x", "1"}, {"0-x", "0"}}, 2, box1(-1, 1)), DescriptorError);
}

TEST_CASE("dimension mismatches are rejected") {
    // Graph over one base variable cannot reference z.
    CHECK_THROWS_AS(make_graph({"z"}, 2, box1(-1, 1)), DescriptorError);
    // Domain box dimension must match the base dimension.
    CHECK_THROWS_AS(make_graph({"x^2"}, 2, DomainBox::cube(2, -1, 1)), DescriptorError);
    // Graphs need at least one free ambient coordinate.
    CHECK_THROWS_AS(make_graph({"x", "x"}, 2, box1(-1, 1)), DescriptorError);
}

TEST_CASE("json round trip") {
    std::vector<SetDescriptor> cases;
    cases.push_back(make_graph({"x^2"}, 2, box1(-1, 1)));
    cases.push_back(make_implicit("x^2 + y^2 + z^2 - 1", 3, DomainBox::cube(3, -1.5, 1.5)));
    cases.push_back(make_parametric({"t", "t^3"}, 2, 0.0, 1.0));
    cases.push_back(make_points({Vec{0.0, 1.0}}, DomainBox::cube(2, -2, 2)));
    cases.push_back(make_piecewise({{"x", "x"}, {"0-x", "0-x"}}, 2, box1(-1, 1)));
    cases.push_back(make_union({cases[0], cases[3]}));

    for (const SetDescriptor& d : cases) {
        nlohmann::ordered_json j = descriptor_to_json(d);
        SetDescriptor back = descriptor_from_json(j);
        CHECK(same_descriptor(d, back));
        // Serialization is stable across one more round.
        CHECK(descriptor_to_json(back) == j);
    }
}

TEST_CASE("json rejects unknown kinds") {
    nlohmann::ordered_json j = descriptor_to_json(make_graph({"x^2"}, 2, box1(-1, 1)));
    j["kind"] = "nonsense";
    CHECK_THROWS_AS(descriptor_from_json(j), DescriptorError);
}

TEST_CASE("descriptor file loading") {
    SetDescriptor d = make_implicit("x^2 + y^2 - 1", 2, DomainBox::cube(2, -1.5, 1.5));
    std::filesystem::path path =
        std::filesystem::temp_directory_path() / "medialkit_test_descriptor.json";
    {
        std::ofstream out(path);
        out << descriptor_to_json(d).dump(2) << "\n";
    }
    SetDescriptor back = load_descriptor_file(path.string());
    CHECK(same_descriptor(d, back));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_descriptor_file("/nonexistent/medialkit.json"), DescriptorError);
}

}  // TEST_SUITE
