#pragma once

#include <string>
#include <vector>

#include "medialkit/cones.hpp"
#include "medialkit/proximity.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

struct FrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Orthonormal tangent/normal split at a point whose finest-scale direction
// set looks like a linear subspace: symmetric (every direction has its
// antipode within pi/16), convex, and flat within pi/16 of the PCA span.
// Throws FrameError otherwise ("not C1-like").
struct TangentFrame {
    Vec base;
    std::size_t tangent_dim = 0;
    std::vector<Vec> tangent;
    std::vector<Vec> normal;
};

TangentFrame estimate_tangent_frame(const KdTree& tree, const Vec& a, double h);

// Normal deviation profile: at each rung eps of the ladder 64h * 0.8^j
// (down to 12h, at least 8 rungs) take the cloud points whose tangential
// radius lies within 3h of eps and record the largest normal deviation.
// The abscissa stored for fitting is the achieved tangential radius of the
// maximizer, which removes the outer-edge bias of the nominal rung.
struct GrowthProfile {
    Vec base;
    std::size_t tangent_dim = 0;
    std::vector<double> nominal_eps;   // descending ladder
    std::vector<double> achieved_eps;  // tangential radius of each maximizer
    std::vector<double> values;        // max normal deviation per rung
    std::vector<Vec> maximizers;       // cloud point realizing each rung
};

GrowthProfile growth_function(const KdTree& tree, const TangentFrame& frame, double h);

// Power-law fit g ~ a * eps^alpha on the populated rungs. A point is
// superquadratic when the fitted exponent is confidently below 2.
struct ExponentFit {
    double alpha = 0;
    double coefficient = 0;
    double alpha_stderr = 0;
    double log_residual = 0;  // max |log g - fit| over rungs
    bool degenerate = false;  // profile at the noise floor
    bool superquadratic = false;
};

inline constexpr double kFitResidualTol = 0.2;

ExponentFit fit_exponent(const GrowthProfile& profile, double noise_floor);

// Frame + total-deviation profile + fit, plus a fit of the deviation along
// each normal axis. The point is superquadratic if the total fit or any
// single-axis fit is (a subquadratic axis can be masked in the total by a
// larger quadratic one at desk scale).
struct SuperquadracityAnalysis {
    TangentFrame frame;
    GrowthProfile profile;
    ExponentFit fit;
    std::vector<GrowthProfile> axis_profiles;
    std::vector<ExponentFit> axis_fits;
    bool superquadratic = false;
};

SuperquadracityAnalysis project_and_classify(const KdTree& tree, const Vec& a, double h,
                                             double noise_floor);

// Tangent-ball emptiness probe: for each normal direction v and radius r in
// {0.4, 0.2, 0.1, 0.05}, the ball centered at a + r v fits iff no cloud
// point outside the 3h neighborhood of a lies strictly inside (depth beyond
// tau_res). Superquadratic deviation toward v pierces every such ball.
struct BallProbeDirection {
    Vec v;
    std::vector<std::uint8_t> fits;
};

struct BallProbe {
    std::vector<double> radii;
    std::vector<BallProbeDirection> directions;
    bool any_fits = false;
};

BallProbe ball_tangency_probe(const KdTree& tree, const TangentFrame& frame, double h,
                              double tau_res, std::vector<Vec> probe_dirs = {});

}  // namespace medialkit
