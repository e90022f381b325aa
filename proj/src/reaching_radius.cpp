#include "medialkit/reaching_radius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "medialkit/cones.hpp"
#include "medialkit/numerics.hpp"

namespace medialkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNormalGate = kPi / 8;
constexpr double kClusterWidth = kPi / 16;

double slack(double t, double h, double tau_res) {
    return std::max(4 * h * h / std::max(t, h), 6 * tau_res);
}

bool ball_clear(const KdTree& tree, const Vec& x, const Vec& v, double t, double h,
                double tau_res) {
    return t <= distance_to_set(tree, x + t * v) + slack(t, h, tau_res);
}

// v counts as normal when it is within pi/8 of orthogonal to every tangent
// direction at x; anything closer to the tangent cone is pierced at every
// scale and gets radius 0 without bisection.
bool passes_normal_gate(const KdTree& tree, const Vec& x, const Vec& v, double h) {
    ConeEstimate cone = estimate_tangent_cone(tree, x, h, {16 * h, 12 * h}, 10 * h);
    const std::vector<Vec>& tangent = cone.directions.empty() && !cone.per_scale.empty()
                                          ? cone.per_scale.front()
                                          : cone.directions;
    if (tangent.empty()) return true;  // isolated point: every direction is normal
    for (const Vec& d : tangent)
        if (angle_between(v, d) < kPi / 2 - kNormalGate) return false;
    return true;
}

}  // namespace

RadiusSample directional_radius(const KdTree& tree, const Vec& x, const Vec& v, double h,
                                double tau_res, double r_max) {
    RadiusSample rs;
    rs.x = x;
    rs.v = normalized(v);
    rs.bisect_tol = std::max(h / 16, 1e-9);

    if (!passes_normal_gate(tree, x, rs.v, h)) {
        rs.normal_dir = false;
        rs.r = 0;
        rs.tau = slack(h, h, tau_res);
        return rs;
    }

    // Pre-scan: find the hold/fail transition and note non-monotone noise.
    const int kScan = 16;
    int last_hold = 0;  // scan index, 0 means "only at the origin"
    bool seen_fail = false;
    for (int k = 1; k <= kScan; ++k) {
        double t = r_max * static_cast<double>(k) / kScan;
        if (ball_clear(tree, x, rs.v, t, h, tau_res)) {
            if (!seen_fail) last_hold = k;
            else rs.monotone = false;
        } else {
            seen_fail = true;
        }
    }
    if (last_hold == kScan) {
        rs.r = r_max;
        rs.capped = true;
        rs.tau = slack(r_max, h, tau_res);
        return rs;
    }
    double lo = r_max * static_cast<double>(last_hold) / kScan;
    double hi = r_max * static_cast<double>(last_hold + 1) / kScan;
    while (hi - lo > rs.bisect_tol) {
        double mid = 0.5 * (lo + hi);
        if (ball_clear(tree, x, rs.v, mid, h, tau_res)) lo = mid;
        else hi = mid;
    }
    rs.r = lo;
    rs.tau = slack(std::max(lo, h), h, tau_res);
    return rs;
}

LimitingRadius limiting_radius(const KdTree& tree, const Vec& a, double h, double tau_res,
                               double r_max) {
    LimitingRadius lr;
    lr.a = a;
    lr.bands = {32 * h, 16 * h, 8 * h};
    std::size_t n = a.size();

    struct Obs {
        Vec dir;
        double r;
        std::size_t band;
    };
    std::vector<Obs> obs;
    for (std::size_t b = 0; b < lr.bands.size(); ++b) {
        double band = lr.bands[b];
        std::vector<std::size_t> ring;
        for (std::size_t idx : tree.radius_search(a, band)) {
            double len = dist(tree.point(idx), a);
            if (len > band / 2) ring.push_back(idx);
        }
        // Spread the probes: at most 8 ring points per band.
        std::vector<Vec> ring_dirs;
        for (std::size_t idx : ring) ring_dirs.push_back(normalized(tree.point(idx) - a));
        std::vector<std::size_t> pick = farthest_direction_subsample(ring_dirs, 8);
        for (std::size_t pi : pick) {
            const Vec& x = tree.point(ring[pi]);
            // Local normal axes from the smallest principal directions of the
            // neighborhood around x.
            std::vector<Vec> local;
            for (std::size_t idx : tree.radius_search(x, 6 * h)) {
                Vec d = tree.point(idx) - x;
                double len = norm(d);
                if (len > 1e-12) local.push_back((1.0 / len) * d);
            }
            if (local.size() < 2) continue;
            EigenResult pca = direction_pca(local, n);
            double top = std::max(pca.values[0], 1e-300);
            std::size_t k = 1;
            for (std::size_t i = 1; i < n; ++i)
                if (pca.values[i] > 0.2 * top) k = i + 1;
            if (k >= n) continue;  // no normal space resolved
            std::vector<Vec> probes;
            if (n - k == 1) {
                probes.push_back(pca.vectors[n - 1]);
                probes.push_back(-1.0 * pca.vectors[n - 1]);
            } else {
                for (const Vec& g : sphere_grid(n - k, 0.7)) {
                    Vec v(n);
                    for (std::size_t j = 0; j < n - k; ++j) v = v + g[j] * pca.vectors[k + j];
                    probes.push_back(v);
                }
            }
            for (const Vec& v : probes) {
                RadiusSample rs = directional_radius(tree, x, v, h, tau_res, r_max);
                if (!rs.normal_dir) continue;
                obs.push_back({rs.v, rs.r, b});
            }
        }
    }
    lr.samples = obs.size();
    if (obs.empty()) {
        lr.r = r_max;
        return lr;
    }

    // Greedy direction clustering at pi/16.
    std::sort(obs.begin(), obs.end(), [](const Obs& x, const Obs& y) {
        if (!(x.dir == y.dir)) return lex_less(x.dir, y.dir);
        return x.band < y.band;
    });
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const Obs& o : obs) {
        RadiusCluster* home = nullptr;
        for (RadiusCluster& c : lr.clusters)
            if (angle_between(o.dir, c.direction) < kClusterWidth) {
                home = &c;
                break;
            }
        if (!home) {
            lr.clusters.push_back(RadiusCluster{o.dir, std::vector<double>(lr.bands.size(), nan), 0});
            home = &lr.clusters.back();
        }
        double& cell = home->per_band[o.band];
        if (std::isnan(cell) || o.r < cell) cell = o.r;
    }
    lr.r = std::numeric_limits<double>::infinity();
    for (RadiusCluster& c : lr.clusters) {
        c.r_limit = r_max;
        for (std::size_t b = c.per_band.size(); b-- > 0;) {
            if (!std::isnan(c.per_band[b])) {
                c.r_limit = c.per_band[b];  // finest populated band wins
                break;
            }
        }
        lr.r = std::min(lr.r, c.r_limit);
    }
    return lr;
}

ContinuityScan radius_continuity_scan(const KdTree& tree, const std::vector<Vec>& path,
                                      const std::vector<Vec>& dirs, double h, double tau_res,
                                      double r_max) {
    ContinuityScan scan;
    scan.points = path;
    for (std::size_t i = 0; i < path.size(); ++i) {
        RadiusSample rs = directional_radius(tree, path[i], dirs[i], h, tau_res, r_max);
        scan.radii.push_back(rs.r);
    }
    double tol = std::max(h / 16, 1e-9);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        double step = dist(path[i + 1], path[i]);
        bool bad = std::fabs(scan.radii[i + 1] - scan.radii[i]) > 3 * tol + 20 * step;
        scan.flags.push_back(bad ? 1 : 0);
        if (bad) ++scan.violations;
    }
    return scan;
}

}  // namespace medialkit
