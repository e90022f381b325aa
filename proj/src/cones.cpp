#include "medialkit/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "medialkit/numerics.hpp"

namespace medialkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSubspaceBand = kPi / 14;   // direction-to-subspace tolerance
constexpr double kMidpointTol = kPi / 32;    // witness tolerance
constexpr double kAntipodalGap = kPi / 16;   // pairs beyond pi - this are antipodal

double min_angle_to(const Vec& w, const std::vector<Vec>& set) {
    double best = kPi;
    for (const Vec& d : set) best = std::min(best, angle_between(w, d));
    return best;
}

std::vector<Vec> directions_in_annulus(const KdTree& tree, const Vec& a, double lo, double hi) {
    std::vector<Vec> dirs;
    for (std::size_t idx : tree.radius_search(a, hi)) {
        Vec delta = tree.point(idx) - a;
        double len = norm(delta);
        if (len > lo && len > 1e-12) dirs.push_back((1.0 / len) * delta);
    }
    return dirs;
}

}  // namespace

std::vector<Vec> thin_directions(std::vector<Vec> dirs, double res) {
    std::sort(dirs.begin(), dirs.end(), lex_less);
    std::vector<Vec> kept;
    for (const Vec& d : dirs) {
        bool close = false;
        for (const Vec& k : kept) {
            if (angle_between(d, k) < res) {
                close = true;
                break;
            }
        }
        if (!close) kept.push_back(d);
    }
    return kept;
}

double directed_angular_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.empty()) return 0;
    if (b.empty()) return kPi;
    double worst = 0;
    for (const Vec& d : a) worst = std::max(worst, min_angle_to(d, b));
    return worst;
}

double angular_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    return std::max(directed_angular_hausdorff(a, b), directed_angular_hausdorff(b, a));
}

ConeEstimate estimate_tangent_cone(const KdTree& tree, const Vec& a, double h,
                                   std::vector<double> scales, double min_scale_floor) {
    if (!(h > 0)) throw ConeError("cone estimate requires positive h");
    if (min_scale_floor < 0) min_scale_floor = 10 * h;
    if (scales.empty()) scales = {64 * h, 32 * h, 16 * h};
    std::sort(scales.begin(), scales.end(), std::greater<double>());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    for (double s : scales)
        if (s < min_scale_floor - 1e-12)
            throw ConeError("cone scale below the resolution floor");

    ConeEstimate est;
    est.base = a;
    est.scales = scales;
    for (double rho : scales)
        est.per_scale.push_back(thin_directions(directions_in_annulus(tree, a, rho / 2, rho),
                                                kConeThinRes));
    est.directions = est.per_scale.back();
    if (est.per_scale.size() >= 2) {
        const auto& fine = est.per_scale[est.per_scale.size() - 1];
        const auto& prev = est.per_scale[est.per_scale.size() - 2];
        if (fine.empty() || prev.empty()) {
            est.drift = kPi;
            est.stabilized = false;
        } else {
            est.drift = angular_hausdorff(fine, prev);
            est.stabilized = est.drift < kConeStabilityTol;
        }
    } else {
        est.drift = 0;
        est.stabilized = !est.directions.empty();
    }
    return est;
}

ConvexityReport is_convex_cone(const std::vector<Vec>& directions, std::size_t dim) {
    ConvexityReport rep;
    rep.subspace_dim = directions.size() <= 1 ? directions.size() : 0;
    if (directions.size() <= 1) return rep;

    EigenResult pca = direction_pca(directions, dim);
    double top = std::max(pca.values[0], 0.0);
    std::size_t k = 1;
    for (std::size_t i = 1; i < dim; ++i)
        if (pca.values[i] >= 0.25 * top) k = i + 1;
    auto fits_subspace = [&](std::size_t kk) {
        for (const Vec& d : directions) {
            double p2 = 0;
            for (std::size_t j = 0; j < kk; ++j) {
                double c = dot(d, pca.vectors[j]);
                p2 += c * c;
            }
            if (std::sqrt(std::min(p2, 1.0)) < std::cos(kSubspaceBand)) return false;
        }
        return true;
    };
    while (k < dim && !fits_subspace(k)) ++k;
    rep.subspace_dim = k;
    if (k == 1) return rep;  // rays and lines are convex

    std::vector<Vec> proj;
    proj.reserve(directions.size());
    for (const Vec& d : directions) {
        Vec u(k);
        for (std::size_t j = 0; j < k; ++j) u[j] = dot(d, pca.vectors[j]);
        double len = norm(u);
        if (len > 1e-9) proj.push_back((1.0 / len) * u);
    }
    proj = thin_directions(std::move(proj), kConeThinRes);
    if (proj.size() <= 1) {
        rep.subspace_dim = 1;
        return rep;
    }

    auto to_ambient = [&](const Vec& u) {
        Vec w(dim);
        for (std::size_t j = 0; j < k; ++j) w = w + u[j] * pca.vectors[j];
        return w;
    };
    auto require_witness = [&](const Vec& w) {
        double gap = min_angle_to(w, proj);
        if (gap > kMidpointTol && gap > rep.witness_gap) {
            rep.convex = false;
            rep.witness_gap = gap;
            rep.missing_direction = to_ambient(w);
        }
    };

    for (std::size_t i = 0; i < proj.size(); ++i) {
        for (std::size_t j = i + 1; j < proj.size(); ++j) {
            const Vec& u = proj[i];
            const Vec& v = proj[j];
            double ang = angle_between(u, v);
            if (ang <= kPi - kAntipodalGap) {
                Vec sum = u + v;
                double len = norm(sum);
                if (len > 1e-9) require_witness((1.0 / len) * sum);
                continue;
            }
            // Antipodal pair: together with any independent third member the
            // cone must contain the semicircle from u toward that member.
            for (const Vec& w : proj) {
                Vec q = w - dot(w, u) * u;
                double qlen = norm(q);
                if (qlen < std::sin(kSubspaceBand)) continue;
                Vec qh = (1.0 / qlen) * q;
                for (double s = kMidpointTol; s <= kPi - kAntipodalGap + 1e-12;
                     s += kMidpointTol) {
                    Vec arc = std::cos(s) * u + std::sin(s) * qh;
                    require_witness(arc);
                }
            }
        }
    }
    return rep;
}

std::vector<Vec> polar_cone(const std::vector<Vec>& directions, std::size_t dim,
                            double grid_res, double tau) {
    std::vector<Vec> out;
    for (const Vec& w : sphere_grid(dim, grid_res)) {
        bool ok = true;
        for (const Vec& d : directions) {
            if (dot(w, d) > tau) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(w);
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

ConeCriterionResult tangent_cone_criterion(const KdTree& tree, const Vec& a, double h) {
    ConeCriterionResult res;
    res.cone = estimate_tangent_cone(tree, a, h);
    std::ostringstream msg;
    if (!res.cone.stabilized) {
        msg << "cone not stabilized (drift " << res.cone.drift << " rad)";
        res.detail = msg.str();
        return res;
    }
    res.convexity = is_convex_cone(res.cone.directions, a.size());
    if (res.convexity.convex) {
        msg << "tangent cone convex within tolerance; criterion silent";
        res.detail = msg.str();
        return res;
    }
    res.verdict = CriterionVerdict::MedialApproaches;
    msg << "tangent cone nonconvex: hull direction missing by " << res.convexity.witness_gap
        << " rad";
    res.detail = msg.str();
    return res;
}

LiminfResult liminf_criterion(const KdTree& tree, const Vec& a, double h) {
    LiminfResult res;
    res.base_cone = estimate_tangent_cone(tree, a, h);
    if (!res.base_cone.stabilized || res.base_cone.directions.empty()) {
        res.detail = "base cone not stabilized";
        return res;
    }
    const std::vector<double> rings = {48 * h, 24 * h};
    std::ostringstream msg;
    bool any_ring = false;
    bool all_fail = true;
    for (std::size_t r = 0; r < rings.size(); ++r) {
        double c = rings[r];
        std::vector<Vec> dirs;
        std::vector<Vec> pts;
        for (std::size_t idx : tree.radius_search(a, 1.25 * c)) {
            Vec delta = tree.point(idx) - a;
            double len = norm(delta);
            if (len >= 0.8 * c && len > 1e-12) {
                dirs.push_back((1.0 / len) * delta);
                pts.push_back(tree.point(idx));
            }
        }
        if (dirs.size() < 8) {
            msg << "ring " << c << ": too few approach points; ";
            continue;
        }
        std::vector<Vec> approach;
        for (std::size_t k : farthest_direction_subsample(dirs, 16)) approach.push_back(pts[k]);

        double ring_score = 0;
        Vec ring_witness = res.base_cone.directions.front();
        std::vector<double> scores(res.base_cone.directions.size(), 0.0);
        for (const Vec& x : approach) {
            double ci = dist(x, a);
            std::vector<double> scales = {std::max(ci / 2, 6 * h), std::max(ci / 3, 6 * h)};
            ConeEstimate local = estimate_tangent_cone(tree, x, h, scales, 6 * h);
            const std::vector<Vec>* local_dirs = &local.directions;
            if (local_dirs->empty() && local.per_scale.size() > 1 &&
                !local.per_scale.front().empty())
                local_dirs = &local.per_scale.front();
            if (local_dirs->empty()) continue;
            ++res.approach_count;
            for (std::size_t w = 0; w < res.base_cone.directions.size(); ++w)
                scores[w] = std::max(scores[w],
                                     min_angle_to(res.base_cone.directions[w], *local_dirs));
        }
        for (double s : scores) ring_score = std::max(ring_score, s);
        bool found = false;
        for (std::size_t w = 0; w < scores.size(); ++w) {
            if (scores[w] < 0.95 * ring_score) continue;
            if (!found || lex_less(ring_witness, res.base_cone.directions[w])) {
                ring_witness = res.base_cone.directions[w];
                found = true;
            }
        }
        any_ring = true;
        if (ring_score < kLiminfSeparation) all_fail = false;
        res.worst_score = ring_score;  // finest ring wins (rings descend)
        res.witness = ring_witness;
        msg << "ring " << c << ": score " << ring_score << " rad; ";
    }
    if (!any_ring) {
        res.detail = msg.str() + "criterion inconclusive";
        return res;
    }
    res.containment_fails = all_fail;
    if (res.containment_fails) {
        res.verdict = CriterionVerdict::MedialApproaches;
        msg << "cone direction escapes nearby cones";
    } else {
        msg << "containment holds within tolerance";
    }
    res.detail = msg.str();
    return res;
}

}  // namespace medialkit
