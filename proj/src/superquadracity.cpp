#include "medialkit/superquadracity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "medialkit/numerics.hpp"

namespace medialkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFrameBand = kPi / 16;
// Exact quadratic growth fits alpha = 2 to machine precision with a near-zero
// stderr, so the subquadratic test needs a strict margin to stay deterministic.
constexpr double kAlphaMargin = 0.05;

struct Decomposed {
    Vec point;
    double tangential;  // ||projection onto tangent subspace||
    double normal;      // ||residual||
    Vec offset;         // point - base
};

std::vector<Decomposed> decompose_neighbors(const KdTree& tree, const TangentFrame& frame,
                                            double radius) {
    std::vector<Decomposed> out;
    for (std::size_t idx : tree.radius_search(frame.base, radius)) {
        Vec off = tree.point(idx) - frame.base;
        double full2 = norm2(off);
        if (full2 < 1e-24) continue;
        double t2 = 0;
        for (const Vec& e : frame.tangent) {
            double c = dot(off, e);
            t2 += c * c;
        }
        Decomposed d;
        d.point = tree.point(idx);
        d.offset = off;
        d.tangential = std::sqrt(t2);
        d.normal = std::sqrt(std::max(0.0, full2 - t2));
        out.push_back(d);
    }
    return out;
}

std::vector<double> rung_ladder(double h) {
    std::vector<double> eps;
    for (double e = 64 * h; e >= 12 * h; e *= 0.8) eps.push_back(e);
    return eps;
}

GrowthProfile profile_from(const KdTree& tree, const TangentFrame& frame, double h,
                           const Vec* axis) {
    GrowthProfile prof;
    prof.base = frame.base;
    prof.tangent_dim = frame.tangent_dim;
    std::vector<double> ladder = rung_ladder(h);
    std::vector<Decomposed> nb = decompose_neighbors(tree, frame, ladder.front() + 16 * h);
    for (double eps : ladder) {
        double best = -1;
        const Decomposed* arg = nullptr;
        for (const Decomposed& d : nb) {
            if (std::fabs(d.tangential - eps) > 3 * h) continue;
            double v = axis ? std::fabs(dot(d.offset, *axis)) : d.normal;
            if (v > best || (v == best && arg && lex_less(d.point, arg->point))) {
                best = v;
                arg = &d;
            }
        }
        if (!arg) continue;
        prof.nominal_eps.push_back(eps);
        prof.achieved_eps.push_back(arg->tangential);
        prof.values.push_back(best);
        prof.maximizers.push_back(arg->point);
    }
    if (prof.values.size() < 8)
        throw FrameError("growth profile underpopulated: fewer than 8 rungs had members");
    return prof;
}

}  // namespace

TangentFrame estimate_tangent_frame(const KdTree& tree, const Vec& a, double h) {
    ConeEstimate cone = estimate_tangent_cone(tree, a, h);
    const std::vector<Vec>& dirs = cone.directions;
    std::size_t n = a.size();
    if (dirs.size() < 2) throw FrameError("not C1-like: too few finest-scale directions");
    for (const Vec& d : dirs) {
        Vec anti = -1.0 * d;
        double gap = kPi;
        for (const Vec& e : dirs) gap = std::min(gap, angle_between(anti, e));
        if (gap > kFrameBand)
            throw FrameError("not C1-like: direction set is not symmetric about the point");
    }
    ConvexityReport conv = is_convex_cone(dirs, n);
    if (!conv.convex) throw FrameError("not C1-like: tangent cone is not convex");

    // PCA runs on the raw annulus offsets rather than the thinned
    // representatives: thinning keeps lexicographic survivors whose tilts
    // need not mirror, and that bias would leak into the normal component
    // of every growth value.
    double rho = cone.scales.empty() ? 16 * h : cone.scales.back();
    std::vector<Vec> raw;
    for (std::size_t idx : tree.radius_search(a, rho)) {
        Vec off = tree.point(idx) - a;
        double r = norm(off);
        if (r <= rho / 2 || r < 1e-15) continue;
        raw.push_back((1.0 / r) * off);
    }
    EigenResult pca = direction_pca(raw.size() >= 2 ? raw : dirs, n);
    double top = std::max(pca.values[0], 1e-300);
    std::size_t k = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (pca.values[i] > 0.2 * top) k = i + 1;
    for (const Vec& d : dirs) {
        double p2 = 0;
        for (std::size_t j = 0; j < k; ++j) {
            double c = dot(d, pca.vectors[j]);
            p2 += c * c;
        }
        if (std::sqrt(std::min(p2, 1.0)) < std::cos(kFrameBand))
            throw FrameError("not C1-like: directions stray from the tangent subspace");
    }

    TangentFrame frame;
    frame.base = a;
    frame.tangent_dim = k;
    for (std::size_t j = 0; j < n; ++j)
        (j < k ? frame.tangent : frame.normal).push_back(pca.vectors[j]);
    return frame;
}

GrowthProfile growth_function(const KdTree& tree, const TangentFrame& frame, double h) {
    return profile_from(tree, frame, h, nullptr);
}

ExponentFit fit_exponent(const GrowthProfile& profile, double noise_floor) {
    ExponentFit fit;
    std::vector<double> lx, ly;
    double peak = 0;
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        peak = std::max(peak, profile.values[i]);
        if (profile.values[i] > noise_floor && profile.achieved_eps[i] > 0) {
            lx.push_back(std::log(profile.achieved_eps[i]));
            ly.push_back(std::log(profile.values[i]));
        }
    }
    if (peak <= noise_floor || lx.size() < 4) {
        fit.degenerate = true;
        return fit;
    }
    LineFit line = fit_line(lx, ly);
    fit.alpha = line.slope;
    fit.coefficient = std::exp(line.intercept);
    fit.alpha_stderr = line.slope_stderr;
    fit.log_residual = line.max_abs_residual;
    fit.superquadratic = fit.alpha > 0 && fit.alpha + 3 * fit.alpha_stderr < 2 - kAlphaMargin &&
                         fit.coefficient > 0 && fit.log_residual < kFitResidualTol;
    return fit;
}

SuperquadracityAnalysis project_and_classify(const KdTree& tree, const Vec& a, double h,
                                             double noise_floor) {
    SuperquadracityAnalysis an;
    an.frame = estimate_tangent_frame(tree, a, h);
    an.profile = growth_function(tree, an.frame, h);
    an.fit = fit_exponent(an.profile, noise_floor);
    an.superquadratic = an.fit.superquadratic;
    for (const Vec& axis : an.frame.normal) {
        GrowthProfile p = profile_from(tree, an.frame, h, &axis);
        ExponentFit f = fit_exponent(p, noise_floor);
        an.superquadratic = an.superquadratic || f.superquadratic;
        an.axis_profiles.push_back(std::move(p));
        an.axis_fits.push_back(f);
    }
    return an;
}

BallProbe ball_tangency_probe(const KdTree& tree, const TangentFrame& frame, double h,
                              double tau_res, std::vector<Vec> probe_dirs) {
    BallProbe probe;
    probe.radii = {0.4, 0.2, 0.1, 0.05};
    std::size_t n = frame.base.size();
    if (probe_dirs.empty()) {
        if (frame.normal.size() == 1) {
            probe_dirs.push_back(frame.normal[0]);
            probe_dirs.push_back(-1.0 * frame.normal[0]);
        } else if (frame.normal.size() >= 2) {
            std::size_t m = frame.normal.size() == 2 ? 2u : 3u;
            for (const Vec& g : sphere_grid(m, 0.4)) {
                Vec v(n);
                for (std::size_t j = 0; j < m && j < frame.normal.size(); ++j)
                    v = v + g[j] * frame.normal[j];
                probe_dirs.push_back(v);
            }
        }
    }
    for (const Vec& v : probe_dirs) {
        BallProbeDirection bd;
        bd.v = v;
        for (double r : probe.radii) {
            Vec center = frame.base + r * v;
            bool pierced = false;
            for (std::size_t idx : tree.radius_search(center, r - tau_res)) {
                if (dist(tree.point(idx), frame.base) > 3 * h) {
                    pierced = true;
                    break;
                }
            }
            bd.fits.push_back(pierced ? 0 : 1);
            if (!pierced) probe.any_fits = true;
        }
        probe.directions.push_back(std::move(bd));
    }
    return probe;
}

}  // namespace medialkit
