#pragma once

#include <array>
#include <string>
#include <vector>

#include "medialkit/proximity.hpp"
#include "medialkit/sampling.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

inline constexpr double kDefaultThetaMin = 0.1;

// Foot-point basins of a query point: members of the tight slab
// d + max(1.3h, 6 tau_res) are flooded in order of increasing distance over
// the 1.9h neighbor graph; a basin survives a saddle only when it is at
// least h/22 deeper. theta_sep is the largest angle between basin
// representatives, or pi when the members wrap around the query point
// (full-ring feet have a single basin but separate the space maximally).
struct BasinAnalysis {
    double d = 0;
    std::size_t member_count = 0;
    std::size_t basin_count = 0;
    std::vector<std::size_t> representative_indices;  // into the cloud
    std::vector<Vec> representatives;                 // lex sorted
    double theta_sep = 0;
    bool wrapped = false;
};

BasinAnalysis analyze_basins(const KdTree& tree, const Vec& a, double h, double tau_res);

// Azimuthal wrap test on unit directions (full-ring feet). Shared with the
// brute-force cross-check so both detectors apply one angle rule.
bool directions_wrap(const std::vector<Vec>& dirs, std::size_t n);

struct MedialPoint {
    Vec location;
    double d = 0;
    double theta_sep = 0;
    int level = 0;
};

// Grid scan for medial points: a node is emitted iff its feet split into
// basins separated by at least theta_min and it stands clear of the set
// (d > 3h). Nodes whose representatives touch the sampling boundary are
// artifacts of clipping and are dropped.
struct MedialScanConfig {
    DomainBox region;
    double spacing = 0;
    double theta_min = kDefaultThetaMin;
};

std::vector<MedialPoint> detect_medial_points(const SampledSet& cloud, const KdTree& tree,
                                              const MedialScanConfig& cfg);

void write_medial_csv(const std::vector<MedialPoint>& pts, std::size_t dim, std::ostream& out);

enum class ReachVerdict { Reached, Separated, Inconclusive };

struct ReachLevel {
    double h = 0;
    double delta_raw = 0;    // distance from x0 to the closest detected point
    std::size_t count = 0;   // detections in the final window
    double window = 0;       // window radius that produced them
    bool capped = false;     // window hit the box cap with no detection
};

// Does the medial axis come arbitrarily close to x0? Decided on a sampling
// ladder by three rules evaluated in order:
//   R1: detections within 5h at the two finest levels;
//   R2: the pooled branch profile theta = A (c - c0)^gamma extrapolates to
//       a root c0 within 5h of x0 (tangential branches thin out below the
//       detection floor, so the endpoint must be extrapolated);
//   R3: the detection floor itself shrinks like a positive power of h.
// Separated when the floor stabilizes across refinement (or nothing is ever
// detected).
struct ReachAnalysis {
    Vec x0;
    std::vector<ReachLevel> levels;
    ReachVerdict verdict = ReachVerdict::Inconclusive;
    std::string rule;
    double delta_sep = 0;  // standoff estimate when separated
    double slope = 0;      // d log delta_raw / d log h
    double c0 = 0;         // pooled-fit endpoint
    double gamma = 0;      // pooled-fit exponent
    bool pool_fit_valid = false;
    // Inner envelope of the detections: per angle bin in the extrapolation
    // window, the closest (distance, theta_sep) pair across all levels.
    std::vector<std::array<double, 2>> branch_points;
    std::string detail;
};

ReachAnalysis detect_reach(const SetDescriptor& desc, const SamplingConfig& cfg, const Vec& x0,
                           double theta_min = kDefaultThetaMin);

// Detection-floor profile: (h, delta_raw) per ladder level and the log-log
// slope of the floor.
struct MedialProfile {
    std::vector<double> h_levels;
    std::vector<double> delta;
    double slope = 0;
};

MedialProfile medial_profile(const SetDescriptor& desc, const SamplingConfig& cfg, const Vec& x0,
                             double theta_min = kDefaultThetaMin);

}  // namespace medialkit
