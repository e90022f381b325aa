#pragma once

#include <string>
#include <vector>

#include "medialkit/proximity.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

struct ConeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Greedy angular thinning: process in lexicographic order, keep a direction
// iff it is at least `res` radians from every kept one.
std::vector<Vec> thin_directions(std::vector<Vec> dirs, double res);

// sup over A of the angle to the nearest member of B.
double directed_angular_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);
double angular_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b);

// Tangent cone direction estimate at a point: for each scale rho, unit
// directions to cloud points in the annulus (rho/2, rho], thinned at pi/64.
// The cone is considered stabilized when the two finest scales agree within
// tau_cone in angular Hausdorff distance.
struct ConeEstimate {
    Vec base;
    std::vector<double> scales;               // descending
    std::vector<std::vector<Vec>> per_scale;  // thinned, lex sorted
    std::vector<Vec> directions;              // finest scale
    bool stabilized = false;
    double drift = 0;  // Hausdorff between the two finest scales
};

inline constexpr double kConeThinRes = 3.14159265358979323846 / 64;
inline constexpr double kConeStabilityTol = 0.25;

// Scales default to {64h, 32h, 16h}. Scales below min_scale_floor (default
// 10h) are rejected; the liminf path passes an explicit 6h floor because it
// must estimate cones close to the base point.
ConeEstimate estimate_tangent_cone(const KdTree& tree, const Vec& a, double h,
                                   std::vector<double> scales = {},
                                   double min_scale_floor = -1);

// Convexity of the cone spanned by a direction set. The directions are first
// projected into the dominant PCA subspace (smallest k with all directions
// within pi/14 of it), then checked by the midpoint rule (the normalized sum
// of every non-antipodal pair must be witnessed within pi/32) and by the
// antipodal rule (for an antipodal pair and a third independent member the
// whole semicircle through them must be witnessed).
struct ConvexityReport {
    bool convex = true;
    std::size_t subspace_dim = 0;
    Vec missing_direction;  // ambient coordinates of an unwitnessed direction
    double witness_gap = 0;
};

ConvexityReport is_convex_cone(const std::vector<Vec>& directions, std::size_t dim);

// Discrete polar cone: sphere-grid directions w with <w, d> <= tau for every
// cone direction d.
std::vector<Vec> polar_cone(const std::vector<Vec>& directions, std::size_t dim,
                            double grid_res = 0.1, double tau = 0.05);

enum class CriterionVerdict { MedialApproaches, Inconclusive };

// Nonconvex stabilized tangent cone forces the closure of the medial axis
// through the point. Convex or unstabilized cones are inconclusive.
struct ConeCriterionResult {
    ConeEstimate cone;
    ConvexityReport convexity;
    CriterionVerdict verdict = CriterionVerdict::Inconclusive;
    std::string detail;
};

ConeCriterionResult tangent_cone_criterion(const KdTree& tree, const Vec& a, double h);

// Kuratowski lower-limit test: when the medial axis stays away from a, the
// cone at a must be contained in the lower limit of cones at nearby set
// points. A base-cone direction far from every cone at some approach point
// witnesses the failure of that containment.
struct LiminfResult {
    ConeEstimate base_cone;
    double worst_score = 0;  // radians
    Vec witness;
    std::size_t approach_count = 0;
    bool containment_fails = false;  // worst_score >= pi/8
    CriterionVerdict verdict = CriterionVerdict::Inconclusive;
    std::string detail;
};

inline constexpr double kLiminfSeparation = 3.14159265358979323846 / 8;

LiminfResult liminf_criterion(const KdTree& tree, const Vec& a, double h);

}  // namespace medialkit
