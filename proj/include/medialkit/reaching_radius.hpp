#pragma once

#include <vector>

#include "medialkit/proximity.hpp"
#include "medialkit/sampling.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

// Radius of the largest empty tangent ball at x pointing along v, found by
// bisection on the monotone predicate t <= d(x + t v) + tau(t) with the
// tight slack tau(t) = max(4h^2/t, 6 tau_res). Directions far from the
// discrete normal cone (more than pi/8) get radius 0 outright: a tangent
// ball along a non-normal direction is pierced at every scale.
struct RadiusSample {
    Vec x;
    Vec v;
    double r = 0;
    double tau = 0;          // slack at the decided radius
    double bisect_tol = 0;
    bool capped = false;     // predicate still held at r_max
    bool monotone = true;    // pre-scan saw a clean hold-then-fail pattern
    bool normal_dir = true;  // v passed the normal-cone gate
};

RadiusSample directional_radius(const KdTree& tree, const Vec& x, const Vec& v, double h,
                                double tau_res, double r_max);

// Limiting (lower-limit) radius at a: directional radii of set neighbors in
// shrinking dyadic bands around a, grouped by direction cluster (pi/16).
// A cluster's limit is its minimum radius in the finest band where it shows
// up; the point's radius is the minimum over clusters.
struct RadiusCluster {
    Vec direction;
    std::vector<double> per_band;  // min radius per band, NaN when absent
    double r_limit = 0;
};

struct LimitingRadius {
    Vec a;
    std::vector<double> bands;  // descending, dyadic in h
    std::vector<RadiusCluster> clusters;
    double r = 0;
    std::size_t samples = 0;
};

LimitingRadius limiting_radius(const KdTree& tree, const Vec& a, double h, double tau_res,
                               double r_max);

// Evaluates the directional radius along a path of set points and flags
// jumps larger than the instrument can explain (3 bisection tolerances plus
// a Lipschitz allowance of 20 per unit step).
struct ContinuityScan {
    std::vector<Vec> points;
    std::vector<double> radii;
    std::vector<std::uint8_t> flags;  // flags[i] refers to the step i -> i+1
    std::size_t violations = 0;
};

ContinuityScan radius_continuity_scan(const KdTree& tree, const std::vector<Vec>& path,
                                      const std::vector<Vec>& dirs, double h, double tau_res,
                                      double r_max);

}  // namespace medialkit
