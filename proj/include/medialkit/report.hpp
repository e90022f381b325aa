#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "medialkit/cones.hpp"
#include "medialkit/medial_axis.hpp"
#include "medialkit/proximity.hpp"
#include "medialkit/reaching_radius.hpp"
#include "medialkit/superquadracity.hpp"

#include "json.hpp"

namespace medialkit {

// Machine-readable result of one CLI run. Everything except the meta block
// is a pure function of the inputs; timestamp and elapsed time live only in
// meta so reports can be compared byte for byte.
struct AnalysisReport {
    std::string command;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::vector<std::string> warnings;
    std::string timestamp;  // meta
    double elapsed_s = 0;   // meta
};

nlohmann::ordered_json report_to_json(const AnalysisReport& r, bool include_meta = true);
void write_report(const AnalysisReport& r, std::ostream& out, bool include_meta = true);

std::string verdict_name(ReachVerdict v);
std::string criterion_name(CriterionVerdict v);

nlohmann::ordered_json vec_json(const Vec& v);
nlohmann::ordered_json basin_json(const BasinAnalysis& b);
nlohmann::ordered_json near_json(const NearSet& ns);
nlohmann::ordered_json cone_estimate_json(const ConeEstimate& c);
nlohmann::ordered_json cone_criterion_json(const ConeCriterionResult& c);
nlohmann::ordered_json liminf_json(const LiminfResult& l);
nlohmann::ordered_json sq_json(const SuperquadracityAnalysis& s);
nlohmann::ordered_json reach_json(const ReachAnalysis& r);
nlohmann::ordered_json radius_json(const LimitingRadius& r);
nlohmann::ordered_json continuity_json(const ContinuityScan& s);

}  // namespace medialkit
