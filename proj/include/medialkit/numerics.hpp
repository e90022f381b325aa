#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "medialkit/vec.hpp"

namespace medialkit {

// Jacobi eigendecomposition of a small symmetric matrix (row-major, n <= 8).
// Eigenvalues descending; eigenvectors returned as rows matching them.
struct EigenResult {
    std::vector<double> values;
    std::vector<Vec> vectors;
};

inline EigenResult jacobi_eigen(std::vector<double> m, std::size_t n) {
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = m[p * n + q];
                if (std::fabs(apq) < 1e-18) continue;
                double app = m[p * n + p], aqq = m[q * n + q];
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double mkp = m[k * n + p], mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double mpk = m[p * n + k], mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (m[a * n + a] != m[b * n + b]) return m[a * n + a] > m[b * n + b];
        return a < b;
    });
    EigenResult res;
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t col = order[oi];
        res.values.push_back(m[col * n + col]);
        Vec e(n);
        for (std::size_t k = 0; k < n; ++k) e[k] = v[k * n + col];
        // canonical sign: first nonzero component positive
        for (std::size_t k = 0; k < n; ++k) {
            if (std::fabs(e[k]) > 1e-12) {
                if (e[k] < 0) e = -1.0 * e;
                break;
            }
        }
        res.vectors.push_back(e);
    }
    return res;
}

// Principal directions of a set of direction vectors (covariance about 0).
inline EigenResult direction_pca(const std::vector<Vec>& dirs, std::size_t n) {
    std::vector<double> cov(n * n, 0.0);
    for (const Vec& d : dirs)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cov[i * n + j] += d[i] * d[j];
    if (!dirs.empty())
        for (double& c : cov) c /= static_cast<double>(dirs.size());
    return jacobi_eigen(cov, n);
}

// Evenly spread unit directions: regular angles in 2D, Fibonacci lattice in
// higher dimensions (3D); count chosen so neighboring directions are about
// `res` radians apart.
inline std::vector<Vec> sphere_grid(std::size_t n, double res) {
    std::vector<Vec> out;
    if (n == 1) {
        out.push_back(Vec{1.0});
        out.push_back(Vec{-1.0});
        return out;
    }
    if (n == 2) {
        auto count = static_cast<std::size_t>(std::ceil(2 * M_PI / res));
        for (std::size_t i = 0; i < count; ++i) {
            double a = 2 * M_PI * static_cast<double>(i) / static_cast<double>(count);
            out.push_back(Vec{std::cos(a), std::sin(a)});
        }
        return out;
    }
    auto count = static_cast<std::size_t>(std::ceil(4 * M_PI / (res * res)));
    count = std::max<std::size_t>(count, 32);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double a = golden * static_cast<double>(i);
        Vec p(n);
        p[0] = r * std::cos(a);
        p[1] = r * std::sin(a);
        p[2] = z;
        out.push_back(p);
    }
    return out;
}

// Greedy farthest-point subsample of unit directions under the angular
// metric. Starts from the lexicographically smallest direction.
inline std::vector<std::size_t> farthest_direction_subsample(const std::vector<Vec>& dirs,
                                                             std::size_t target) {
    std::vector<std::size_t> chosen;
    if (dirs.empty() || target == 0) return chosen;
    std::size_t start = 0;
    for (std::size_t i = 1; i < dirs.size(); ++i)
        if (lex_less(dirs[i], dirs[start])) start = i;
    chosen.push_back(start);
    std::vector<double> best(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) best[i] = angle_between(dirs[i], dirs[start]);
    while (chosen.size() < std::min(target, dirs.size())) {
        std::size_t next = 0;
        double far = -1;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            if (best[i] > far || (best[i] == far && lex_less(dirs[i], dirs[next]))) {
                far = best[i];
                next = i;
            }
        }
        if (far <= 0) break;
        chosen.push_back(next);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            best[i] = std::min(best[i], angle_between(dirs[i], dirs[next]));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// Least squares line y = b0 + b1 x with residual statistics.
struct LineFit {
    double intercept = 0;
    double slope = 0;
    double slope_stderr = 0;
    double max_abs_residual = 0;
    double rms_residual = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit fit;
    std::size_t n = xs.size();
    if (n < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        sse += r * r;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::fabs(r));
    }
    fit.rms_residual = std::sqrt(sse / static_cast<double>(n));
    if (n > 2) fit.slope_stderr = std::sqrt(sse / (static_cast<double>(n - 2) * sxx));
    return fit;
}

}  // namespace medialkit
