#include "medialkit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace medialkit {

namespace {

constexpr int kMaxCellDepth = 12;

struct Raw {
    Vec p;
    double residual;
    int tag;
    std::uint8_t boundary;
};

bool near_box_face(const Vec& base, const DomainBox& box, double margin) {
    for (std::size_t i = 0; i < box.dim(); ++i)
        if (base[i] - box.lo(i) < margin || box.hi(i) - base[i] < margin) return true;
    return false;
}

// Sort lexicographically, then drop points within h/4 of an already-kept
// point (hash grid, neighbor cells).
void finalize(std::vector<Raw>& raw, SampledSet& out, double h) {
    std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        if (!(a.p == b.p)) return lex_less(a.p, b.p);
        return a.tag < b.tag;
    });
    const double cell = h / 4;
    const double cell2 = cell * cell;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> grid;
    auto key_of = [&](const Vec& p) {
        std::uint64_t k = 1469598103934665603ull;
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto ci = static_cast<std::int64_t>(std::floor(p[i] / cell));
            k ^= static_cast<std::uint64_t>(ci) + 0x9e3779b97f4a7c15ull + (k << 6) + (k >> 2);
        }
        return k;
    };
    auto cell_index = [&](const Vec& p, std::size_t axis) {
        return static_cast<std::int64_t>(std::floor(p[axis] / cell));
    };
    std::vector<std::size_t> kept;
    kept.reserve(raw.size());
    std::size_t n = raw.empty() ? 0 : raw[0].p.size();
    std::vector<std::int64_t> lo(n), idx(n);
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const Vec& p = raw[r].p;
        bool dup = false;
        for (std::size_t i = 0; i < n; ++i) {
            lo[i] = cell_index(p, i) - 1;
            idx[i] = lo[i];
        }
        // scan the 3^n neighborhood
        for (;;) {
            Vec probe(n);
            for (std::size_t i = 0; i < n; ++i) probe[i] = (idx[i] + 0.5) * cell;
            auto it = grid.find(key_of(probe));
            if (it != grid.end()) {
                for (std::size_t j : it->second) {
                    if (dist2(raw[j].p, p) < cell2) {
                        dup = true;
                        break;
                    }
                }
            }
            if (dup) break;
            std::size_t axis = 0;
            while (axis < n && ++idx[axis] > lo[axis] + 2) {
                idx[axis] = lo[axis];
                ++axis;
            }
            if (axis == n) break;
        }
        if (!dup) {
            grid[key_of(p)].push_back(r);
            kept.push_back(r);
        }
    }
    out.points.reserve(kept.size());
    for (std::size_t r : kept) {
        out.points.push_back(raw[r].p);
        out.residuals.push_back(raw[r].residual);
        out.member_tags.push_back(raw[r].tag);
        out.boundary_flags.push_back(raw[r].boundary);
        out.tau_res = std::max(out.tau_res, raw[r].residual);
    }
    if (out.points.empty()) throw SamplingError("sampling produced no points");
}

DomainBox effective_box(const SetDescriptor& desc, const SamplingConfig& cfg) {
    if (cfg.box.dim() == desc.base_dim()) return cfg.box;
    return desc.domain;
}

void check_cfg(const SamplingConfig& cfg) {
    if (!(cfg.h > 0)) throw SamplingError("sampling spacing h must be positive");
    if (cfg.tau_res > cfg.h / 10) throw SamplingError("tau_res must be at most h/10");
    if (!(cfg.ladder_factor > 0 && cfg.ladder_factor < 1))
        throw SamplingError("ladder factor must lie in (0,1)");
}

// Recursive cell refinement for graphs: emit cell corners; split while the
// ambient image of the cell is wider than the target spacing.
struct GraphSampler {
    const SetDescriptor& desc;
    const DomainBox& box;
    double h;
    double margin;
    std::vector<Raw>* out;

    void emit(const Vec& base, const std::vector<double>& vals) {
        Raw r;
        r.p = Vec(desc.ambient_dim);
        std::size_t k = desc.base_dim();
        for (std::size_t i = 0; i < k; ++i) r.p[i] = base[i];
        for (std::size_t i = 0; i < vals.size(); ++i) r.p[k + i] = vals[i];
        r.residual = 0.0;
        r.tag = 0;
        r.boundary = near_box_face(base, box, margin) ? 1 : 0;
        out->push_back(r);
    }

    void cell(const Vec& lo, const Vec& hi, int depth) {
        std::size_t k = desc.base_dim();
        std::size_t corners = std::size_t(1) << k;
        double base_diag2 = 0;
        for (std::size_t i = 0; i < k; ++i)
            base_diag2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
        std::vector<std::vector<double>> vals(corners);
        double spread2 = 0;
        for (std::size_t c = 0; c < corners; ++c) {
            Vec b(k);
            for (std::size_t i = 0; i < k; ++i) b[i] = (c >> i) & 1 ? hi[i] : lo[i];
            vals[c] = graph_values(desc, b);
        }
        for (std::size_t i = 0; i < vals[0].size(); ++i) {
            double mn = vals[0][i], mx = vals[0][i];
            for (std::size_t c = 1; c < corners; ++c) {
                mn = std::min(mn, vals[c][i]);
                mx = std::max(mx, vals[c][i]);
            }
            spread2 += (mx - mn) * (mx - mn);
        }
        if (base_diag2 + spread2 <= 0.9 * 0.9 * h * h || depth >= kMaxCellDepth) {
            for (std::size_t c = 0; c < corners; ++c) {
                Vec b(k);
                for (std::size_t i = 0; i < k; ++i) b[i] = (c >> i) & 1 ? hi[i] : lo[i];
                emit(b, vals[c]);
            }
            return;
        }
        Vec mid(k);
        for (std::size_t i = 0; i < k; ++i) mid[i] = 0.5 * (lo[i] + hi[i]);
        for (std::size_t c = 0; c < corners; ++c) {
            Vec clo(k), chi(k);
            for (std::size_t i = 0; i < k; ++i) {
                if ((c >> i) & 1) {
                    clo[i] = mid[i];
                    chi[i] = hi[i];
                } else {
                    clo[i] = lo[i];
                    chi[i] = mid[i];
                }
            }
            cell(clo, chi, depth + 1);
        }
    }
};

}  // namespace

SampledSet sample_graph(const SetDescriptor& desc, const SamplingConfig& cfg) {
    check_cfg(cfg);
    if (desc.kind != SetKind::Graph && desc.kind != SetKind::PiecewiseGraph)
        throw SamplingError("sample_graph requires a graph variant");
    DomainBox box = effective_box(desc, cfg);
    std::size_t k = desc.base_dim();
    double s0 = cfg.h / std::sqrt(static_cast<double>(k));
    std::vector<Raw> raw;
    GraphSampler gs{desc, box, cfg.h, 2 * cfg.h, &raw};

    std::vector<std::int64_t> counts(k);
    for (std::size_t i = 0; i < k; ++i)
        counts[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(box.extent(i) / s0)));
    std::vector<std::int64_t> idx(k, 0);
    for (;;) {
        Vec lo(k), hi(k);
        for (std::size_t i = 0; i < k; ++i) {
            lo[i] = box.lo(i) + box.extent(i) * static_cast<double>(idx[i]) / static_cast<double>(counts[i]);
            hi[i] = box.lo(i) + box.extent(i) * static_cast<double>(idx[i] + 1) / static_cast<double>(counts[i]);
        }
        gs.cell(lo, hi, 0);
        std::size_t axis = 0;
        while (axis < k && ++idx[axis] >= counts[axis]) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == k) break;
    }

    SampledSet out;
    out.h = cfg.h;
    out.descriptor = desc;
    out.box = box;
    finalize(raw, out, cfg.h);
    return out;
}

SampledSet sample_parametric(const SetDescriptor& desc, const SamplingConfig& cfg) {
    check_cfg(cfg);
    if (desc.kind != SetKind::ParametricCurve)
        throw SamplingError("sample_parametric requires a parametric curve");
    DomainBox box = effective_box(desc, cfg);
    double t_lo = box.lo(0), t_hi = box.hi(0);
    std::vector<Raw> raw;
    Vec p_lo = parametric_point(desc, t_lo);
    Vec p_hi = parametric_point(desc, t_hi);

    // Segment refinement: split while the chord is long or the midpoint
    // strays from it.
    struct Seg {
        double t0, t1;
        Vec p0, p1;
        int depth;
    };
    std::vector<Seg> stack;
    const int kInit = 64;
    for (int i = kInit - 1; i >= 0; --i) {
        double a = t_lo + (t_hi - t_lo) * i / kInit;
        double b = t_lo + (t_hi - t_lo) * (i + 1) / kInit;
        stack.push_back({a, b, parametric_point(desc, a), parametric_point(desc, b), 0});
    }
    auto emit = [&](double t, const Vec& p) {
        Raw r;
        r.p = p;
        r.residual = 0.0;
        r.tag = 0;
        r.boundary = (dist(p, p_lo) < 2.5 * cfg.h || dist(p, p_hi) < 2.5 * cfg.h ||
                      t - t_lo < 1e-12 || t_hi - t < 1e-12)
                         ? 1
                         : 0;
        raw.push_back(r);
    };
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double tm = 0.5 * (s.t0 + s.t1);
        Vec pm = parametric_point(desc, tm);
        Vec chord_mid = 0.5 * (s.p0 + s.p1);
        bool fine = dist(s.p0, s.p1) <= 0.9 * cfg.h && dist(pm, chord_mid) <= 0.2 * cfg.h;
        if (fine || s.depth >= 24) {
            emit(s.t0, s.p0);
            emit(tm, pm);
            emit(s.t1, s.p1);
        } else {
            stack.push_back({tm, s.t1, pm, s.p1, s.depth + 1});
            stack.push_back({s.t0, tm, s.p0, pm, s.depth + 1});
        }
    }

    SampledSet out;
    out.h = cfg.h;
    out.descriptor = desc;
    out.box = box;
    finalize(raw, out, cfg.h);
    return out;
}

SampledSet sample_implicit(const SetDescriptor& desc, const SamplingConfig& cfg) {
    check_cfg(cfg);
    if (desc.kind != SetKind::Implicit)
        throw SamplingError("sample_implicit requires an implicit descriptor");
    DomainBox box = effective_box(desc, cfg);
    std::size_t n = desc.ambient_dim;
    const ExpressionAst& f = desc.exprs[0];
    const double fd_step = cfg.h / 100;

    auto gradient = [&](const Vec& p, Vec& g) {
        for (std::size_t i = 0; i < n; ++i) {
            Vec a = p, b = p;
            a[i] += fd_step;
            b[i] -= fd_step;
            g[i] = (f.evaluate(a) - f.evaluate(b)) / (2 * fd_step);
        }
    };

    std::vector<Raw> raw;
    std::vector<std::int64_t> counts(n);
    for (std::size_t i = 0; i < n; ++i)
        counts[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(box.extent(i) / cfg.h)));
    std::vector<std::int64_t> idx(n, 0);
    Vec g(n);
    for (;;) {
        Vec seed(n);
        for (std::size_t i = 0; i < n; ++i)
            seed[i] = box.lo(i) + box.extent(i) * static_cast<double>(idx[i]) / static_cast<double>(counts[i]);
        bool ok = true;
        double f0 = 0;
        try {
            f0 = f.evaluate(seed);
        } catch (const EvalError&) {
            ok = false;
        }
        if (ok) {
            gradient(seed, g);
            double gn = norm(g);
            double band = std::max(10 * cfg.h * gn, 1e-6);
            if (std::fabs(f0) <= band) {
                // damped Newton projection; acceptance needs the residual small
                // both absolutely and relative to the local gradient, so that the
                // first-order distance |f|/|grad f| to the zero set stays below
                // h/8 even where the gradient is nearly flat
                auto accepted = [&](double fval, double grad_norm) {
                    if (std::fabs(fval) > cfg.tau_res) return false;
                    return std::fabs(fval) <= std::max(cfg.h / 8 * grad_norm, 1e-12);
                };
                Vec p = seed;
                double fv = f0;
                double gn_p = gn;
                bool converged = accepted(fv, gn_p);
                for (int it = 0; it < cfg.max_projection_iters && !converged; ++it) {
                    double g2 = gn_p * gn_p;
                    if (g2 < 1e-30) break;
                    double step = 1.0;
                    bool improved = false;
                    for (int damp = 0; damp < 12; ++damp) {
                        Vec q = p - (fv * step / g2) * g;
                        double fq;
                        try {
                            fq = f.evaluate(q);
                        } catch (const EvalError&) {
                            step *= 0.5;
                            continue;
                        }
                        if (std::fabs(fq) < std::fabs(fv)) {
                            p = q;
                            fv = fq;
                            improved = true;
                            break;
                        }
                        step *= 0.5;
                    }
                    if (!improved) break;
                    gradient(p, g);
                    gn_p = norm(g);
                    converged = accepted(fv, gn_p);
                }
                bool inside = true;
                for (std::size_t i = 0; i < n; ++i)
                    if (p[i] < box.lo(i) - 2 * cfg.h || p[i] > box.hi(i) + 2 * cfg.h) inside = false;
                if (converged && inside) {
                    Raw r;
                    r.p = p;
                    r.residual = std::fabs(fv);
                    r.tag = 0;
                    r.boundary = near_box_face(p, box, 2 * cfg.h) ? 1 : 0;
                    raw.push_back(r);
                }
            }
        }
        std::size_t axis = 0;
        while (axis < n && ++idx[axis] > counts[axis]) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == n) break;
    }

    SampledSet out;
    out.h = cfg.h;
    out.descriptor = desc;
    out.box = box;
    finalize(raw, out, cfg.h);
    return out;
}

SampledSet sample_set(const SetDescriptor& desc, const SamplingConfig& cfg) {
    check_cfg(cfg);
    switch (desc.kind) {
        case SetKind::Graph:
        case SetKind::PiecewiseGraph: return sample_graph(desc, cfg);
        case SetKind::Implicit: return sample_implicit(desc, cfg);
        case SetKind::ParametricCurve: return sample_parametric(desc, cfg);
        case SetKind::PointSet: {
            std::vector<Raw> raw;
            for (const auto& p : desc.points) raw.push_back({p, 0.0, 0, 0});
            SampledSet out;
            out.h = cfg.h;
            out.descriptor = desc;
            out.box = desc.domain;
            finalize(raw, out, cfg.h);
            return out;
        }
        case SetKind::Union: {
            // Members keep their own declared domains.
            std::vector<Raw> raw;
            DomainBox hull;
            hull.axes.assign(desc.ambient_dim,
                             {std::numeric_limits<double>::infinity(),
                              -std::numeric_limits<double>::infinity()});
            for (std::size_t m = 0; m < desc.members.size(); ++m) {
                SamplingConfig sub = cfg;
                sub.box = DomainBox{};
                SampledSet part = sample_set(desc.members[m], sub);
                for (std::size_t i = 0; i < part.size(); ++i) {
                    raw.push_back({part.points[i], part.residuals[i], static_cast<int>(m),
                                   part.boundary_flags[i]});
                    for (std::size_t ax = 0; ax < desc.ambient_dim; ++ax) {
                        hull.axes[ax][0] = std::min(hull.axes[ax][0], part.points[i][ax]);
                        hull.axes[ax][1] = std::max(hull.axes[ax][1], part.points[i][ax]);
                    }
                }
            }
            SampledSet out;
            out.h = cfg.h;
            out.descriptor = desc;
            out.box = hull;
            finalize(raw, out, cfg.h);
            return out;
        }
    }
    throw SamplingError("sample_set: unknown kind");
}

std::vector<SampledSet> refinement_ladder(const SetDescriptor& desc, const SamplingConfig& cfg) {
    check_cfg(cfg);
    if (cfg.ladder_depth < 1) throw SamplingError("ladder depth must be at least 1");
    std::vector<SampledSet> levels;
    double h = cfg.h;
    for (int i = 0; i < cfg.ladder_depth; ++i) {
        SamplingConfig level_cfg = cfg.with_h(h);
        // Finer levels keep the tau_res <= h/10 contract on their own.
        level_cfg.tau_res = std::min(cfg.tau_res, h / 10);
        levels.push_back(sample_set(desc, level_cfg));
        h *= cfg.ladder_factor;
    }
    return levels;
}

void write_csv(const SampledSet& s, std::ostream& out) {
    std::size_t n = s.dim();
    for (std::size_t i = 0; i < n; ++i) out << "x" << (i + 1) << ",";
    out << "residual,member_tag\n";
    char buf[40];
    for (std::size_t r = 0; r < s.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.points[r][i]);
            out << buf << ",";
        }
        std::snprintf(buf, sizeof(buf), "%.17g", s.residuals[r]);
        out << buf << "," << s.member_tags[r] << "\n";
    }
}

SampledSet scale_sampled(const SampledSet& s, double lambda) {
    if (!(lambda > 0)) throw SamplingError("scale factor must be positive");
    SampledSet out = s;
    for (auto& p : out.points) p *= lambda;
    out.h = s.h * lambda;
    out.tau_res = s.tau_res * lambda;
    out.box = s.box.scaled(lambda);
    return out;
}

SampledSet rotate_sampled(const SampledSet& s, const std::vector<std::vector<double>>& rot) {
    std::size_t n = s.dim();
    if (rot.size() != n) throw SamplingError("rotation matrix dimension mismatch");
    SampledSet out = s;
    DomainBox hull;
    hull.axes.assign(n, {std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()});
    for (std::size_t r = 0; r < s.size(); ++r) {
        Vec q(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += rot[i][j] * s.points[r][j];
            q[i] = acc;
        }
        out.points[r] = q;
        for (std::size_t ax = 0; ax < n; ++ax) {
            hull.axes[ax][0] = std::min(hull.axes[ax][0], q[ax]);
            hull.axes[ax][1] = std::max(hull.axes[ax][1], q[ax]);
        }
    }
    out.box = hull;
    out.descriptor = make_points(out.points, hull);
    return out;
}

}  // namespace medialkit
