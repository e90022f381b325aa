#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace medialkit {

// One acceptance check. Rows are grouped by criterion id prefix ("AC4.witness"
// belongs to AC4) and carry a coarse tag ("reach", "sq", "cone", "near",
// "radius", "consistency") for --only filtering.
struct VerifyRow {
    std::string id;
    std::string tag;
    std::string expected;
    std::string observed;
    std::string tolerance;
    bool pass = false;
    double elapsed_s = 0;
};

struct VerifyResult {
    std::vector<VerifyRow> rows;
    double total_s = 0;
    bool all_pass = true;
};

// Runs the acceptance criteria. `filter` selects rows whose id starts with it
// or whose tag equals it ("" runs everything). `self_test_perturb` biases the
// first measured value so the harness can prove that a wrong value fails.
VerifyResult run_verify(const std::string& filter = "", bool self_test_perturb = false);

// One line per row plus a summary line.
void print_verify(const VerifyResult& r, std::ostream& out);

}  // namespace medialkit
