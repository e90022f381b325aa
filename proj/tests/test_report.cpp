#include "doctest.h"

#include <sstream>

#include "medialkit/report.hpp"
#include "medialkit/svg.hpp"

using namespace medialkit;

TEST_SUITE("report") {

TEST_CASE("verdict names") {
    CHECK(verdict_name(ReachVerdict::Reached) == "reached");
    CHECK(verdict_name(ReachVerdict::Separated) == "separated");
    CHECK(verdict_name(ReachVerdict::Inconclusive) == "inconclusive");
    CHECK(criterion_name(CriterionVerdict::MedialApproaches) == "medial_approaches");
    CHECK(criterion_name(CriterionVerdict::Inconclusive) == "inconclusive");
}

TEST_CASE("vector serialization") {
    nlohmann::ordered_json j = vec_json(Vec{1.5, -2.0, 0.25});
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 3);
    CHECK(j[0] == 1.5);
    CHECK(j[2] == 0.25);
}

TEST_CASE("meta block is quarantined") {
    AnalysisReport r;
    r.command = "reach";
    r.params["h"] = 0.01;
    r.results["verdict"] = "separated";
    r.warnings.push_back("example warning");
    r.timestamp = "2024-01-01T00:00:00Z";
    r.elapsed_s = 1.25;

    nlohmann::ordered_json with = report_to_json(r, true);
    CHECK(with["tool"] == "medial-kit");
    CHECK(with["command"] == "reach");
    CHECK(with["params"]["h"] == 0.01);
    CHECK(with["results"]["verdict"] == "separated");
    CHECK(with["warnings"].size() == 1);
    REQUIRE(with.contains("meta"));
    CHECK(with["meta"]["timestamp"] == "2024-01-01T00:00:00Z");
    CHECK(with["meta"]["elapsed_s"] == 1.25);

    nlohmann::ordered_json without = report_to_json(r, false);
    CHECK_FALSE(without.contains("meta"));
    // Everything outside meta is a pure function of the inputs.
    with.erase("meta");
    CHECK(with == without);

    std::ostringstream out;
    write_report(r, out, false);
    CHECK(out.str().find("elapsed") == std::string::npos);
    CHECK(out.str().find("\"command\"") != std::string::npos);
}

TEST_CASE("reach analysis serialization") {
    ReachAnalysis ra;
    ra.x0 = Vec{0, 0};
    ra.verdict = ReachVerdict::Reached;
    ra.rule = "R2 branch extrapolation";
    ra.c0 = 0.01;
    ra.gamma = 0.85;
    ra.pool_fit_valid = true;
    ReachLevel lv;
    lv.h = 0.02;
    lv.delta_raw = 0.12;
    lv.count = 7;
    lv.window = 1.0;
    ra.levels.push_back(lv);
    ra.branch_points.push_back({0.1, 0.4});

    nlohmann::ordered_json j = reach_json(ra);
    CHECK(j["verdict"] == "reached");
    CHECK(j["rule"] == "R2 branch extrapolation");
    CHECK(j["pool_fit_valid"] == true);
    REQUIRE(j["levels"].size() == 1);
    CHECK(j["levels"][0]["delta_raw"] == 0.12);
    CHECK(j["levels"][0]["capped"] == false);
    REQUIRE(j["branch_points"].size() == 1);
    CHECK(j["branch_points"][0][1] == 0.4);
}

TEST_CASE("radius serialization represents absent bands as null") {
    LimitingRadius lr;
    lr.a = Vec{1, 0};
    lr.r = 1.0;
    lr.bands = {0.16, 0.08};
    lr.samples = 12;
    RadiusCluster c;
    c.direction = Vec{-1, 0};
    c.per_band = {std::numeric_limits<double>::quiet_NaN(), 1.0};
    c.r_limit = 1.0;
    lr.clusters.push_back(c);

    nlohmann::ordered_json j = radius_json(lr);
    CHECK(j["r"] == 1.0);
    REQUIRE(j["clusters"].size() == 1);
    CHECK(j["clusters"][0]["per_band"][0].is_null());
    CHECK(j["clusters"][0]["per_band"][1] == 1.0);
}

TEST_CASE("plot kinds") {
    CHECK(plot_kind_name(PlotKind::Scatter2d) == plot_kind_name(plot_kind_from_name(
                                                     plot_kind_name(PlotKind::Scatter2d))));
    CHECK(plot_kind_from_name(plot_kind_name(PlotKind::LogLog)) == PlotKind::LogLog);
    CHECK(plot_kind_from_name(plot_kind_name(PlotKind::Scatter3dProjected)) ==
          PlotKind::Scatter3dProjected);
    CHECK_THROWS_AS(plot_kind_from_name("junk"), std::invalid_argument);
    CHECK_THROWS_AS(plot_kind_from_name(""), std::invalid_argument);
}

TEST_CASE("svg documents are valid and deterministic") {
    PlotSpec spec;
    spec.kind = PlotKind::Scatter2d;
    spec.title = "bisector";
    PlotSeries series;
    series.label = "medial";
    series.points = {Vec{0, -0.4}, Vec{0, 0}, Vec{0, 0.4}};
    spec.series.push_back(series);

    auto render = [&] {
        std::ostringstream out;
        emit_plot(spec, out);
        return out.str();
    };
    std::string svg = render();
    CHECK(svg.rfind("<svg", 0) != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("bisector") != std::string::npos);
    CHECK(svg == render());

    // Log-log plots drop nonpositive coordinates instead of failing.
    PlotSpec log_spec;
    log_spec.kind = PlotKind::LogLog;
    PlotSeries mixed;
    mixed.points = {Vec{-1.0, 1.0}, Vec{0.1, 0.2}, Vec{0.2, 0.5}};
    log_spec.series.push_back(mixed);
    std::ostringstream log_out;
    emit_plot(log_spec, log_out);
    CHECK(log_out.str().find("</svg>") != std::string::npos);

    // Projected 3-D scatter records its camera.
    PlotSpec proj;
    proj.kind = PlotKind::Scatter3dProjected;
    PlotSeries curve;
    curve.points = {Vec{0, 0, 0}, Vec{0.5, 0.25, 0.125}};
    proj.series.push_back(curve);
    std::ostringstream proj_out;
    emit_plot(proj, proj_out);
    CHECK(proj_out.str().find("azimuth") != std::string::npos);

    // Empty specs still emit a complete document.
    PlotSpec empty;
    std::ostringstream empty_out;
    emit_plot(empty, empty_out);
    CHECK(empty_out.str().find("</svg>") != std::string::npos);
}

}  // TEST_SUITE
