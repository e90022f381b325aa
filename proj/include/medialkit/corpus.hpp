#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "medialkit/medial_axis.hpp"
#include "medialkit/sampling.hpp"
#include "medialkit/set_model.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric expectation attached to a corpus entry. `quantity` names the
// measured value (convention: "<analysis>.<field>@<point>"), and `basis`
// names the independent computation that froze value/tol.
struct CorpusExpectation {
    std::string quantity;
    double value = 0;
    double tol = 0;
    std::string basis;
};

struct CorpusEntry {
    std::string id;
    std::string summary;
    SetDescriptor descriptor;
    std::vector<Vec> interest_points;
    std::vector<CorpusExpectation> expectations;
};

// Built-in test sets, sorted by id.
const std::vector<CorpusEntry>& corpus();
const CorpusEntry& corpus_entry(const std::string& id);  // throws CorpusError

// CLI set argument: "corpus:<id>" resolves against the corpus, anything else
// is read as a descriptor JSON file.
SetDescriptor resolve_set_argument(const std::string& arg);

struct OracleMedialPoint {
    Vec node;
    double d = 0;
    double theta_sep = 0;
};

// Brute-force medial detector used to cross-check detect_medial_points.
// Exhaustive node grid at spacing fine_h over query_box, linear-scan
// distances (no spatial index, no thinning). Feet are the local minima of
// the node distance over the 3 fine_h adjacency graph of the pool
// d + 2 fine_h + 2 max_residual, clustered by single linkage; a secondary
// cluster counts only when its distance defect fits inside half a lattice
// cell of the bisector, which keeps just-opened branches without bridging
// across the vertex. Same angle rule as the pipeline (theta_min gate,
// wrap -> pi, boundary feet discarded). Throws CorpusError if the grid
// would exceed 1e7 nodes.
std::vector<OracleMedialPoint> oracle_bruteforce_medial(const SetDescriptor& desc,
                                                        const DomainBox& query_box, double fine_h,
                                                        double theta_min = kDefaultThetaMin);

}  // namespace medialkit
