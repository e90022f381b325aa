#include "medialkit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace medialkit {

namespace {

DomainBox box1(double lo, double hi) { return DomainBox::cube(1, lo, hi); }

DomainBox box2(double x0, double x1, double y0, double y1) {
    DomainBox b;
    b.axes = {{x0, x1}, {y0, y1}};
    return b;
}

CorpusExpectation expect(std::string quantity, double value, double tol, std::string basis) {
    CorpusExpectation e;
    e.quantity = std::move(quantity);
    e.value = value;
    e.tol = tol;
    e.basis = std::move(basis);
    return e;
}

std::vector<CorpusEntry> build_corpus() {
    std::vector<CorpusEntry> out;

    {
        CorpusEntry e;
        e.id = "circle";
        e.summary = "unit circle; its medial set is the single center point";
        e.descriptor = make_implicit("x^2 + y^2 - 1", 2, DomainBox::cube(2, -1.2, 1.2));
        e.interest_points = {{1.0, 0.0}};
        e.expectations = {
            expect("radius.r@(1,0)", 1.0, 0.05, "center of curvature at distance 1"),
            expect("oracle.medial_center@(0,0)", 0.0, 0.004,
                   "full-ring feet wrap exactly at the center"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "cone";
        e.summary = "double cone z^2 = x^2 + y^2; the axis is medial, feet form full rings";
        e.descriptor = make_implicit("x^2 + y^2 - z^2", 3, DomainBox::cube(3, -1.0, 1.0));
        e.interest_points = {{0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
        e.expectations = {
            expect("proximity.d@(0,0,1)", 0.70710678, 0.01,
                   "closed form: min over t of sqrt(2t^2 - 2t + 1)"),
            expect("near_set.angular_diameter@(0,0,1)", 2.66, 0.15,
                   "slab trigonometry at eps_near = 0.12 around the foot ring t = 1/2"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "cross";
        e.summary = "two perpendicular lines through the origin; nonconvex tangent cone";
        e.descriptor = make_union({make_graph({"0"}, 2, box1(-1.0, 1.0)),
                                   make_parametric({"0", "t"}, 2, -1.0, 1.0)});
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("cone.nonconvex@(0,0)", 1.0, 0.5,
                   "exact tangent cone is the axis pair, whose hull adds the diagonals"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "cubic_curve_3d";
        e.summary = "smooth space curve (t, t^2, t^3); quadratic growth, separated";
        e.descriptor = make_parametric({"t", "t^2", "t^3"}, 3, -1.0, 1.0);
        e.interest_points = {{0.0, 0.0, 0.0}};
        e.expectations = {
            expect("sq.alpha@(0,0,0)", 2.0, 0.1, "normal deviation sqrt(t^4 + t^6) ~ t^2"),
            expect("radius.r@(0,0,0)", 0.5, 0.05, "curvature kappa = 2 at t = 0"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "cusp";
        e.summary = "superquadratic cusp y = |x|^(3/2); reached although the tangent cone is a line";
        e.descriptor = make_graph({"pow(abs(x), 1.5)"}, 2, box1(-1.0, 1.0));
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("sq.alpha@(0,0)", 1.5, 0.05, "exact growth g(eps) = eps^(3/2) + O(eps^(5/2))"),
            expect("reach.c0@(0,0)", 0.0, 0.025,
                   "medial branch x = 0 with feet angle theta(c) ~ 4.5 c extrapolates to 0"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "ellipse";
        e.summary = "ellipse x^2/4 + y^2 = 1; reaching radius dips to b^2/a at the vertices";
        e.descriptor = make_implicit("x^2/4 + y^2 - 1", 2, box2(-2.2, 2.2, -1.2, 1.2));
        e.interest_points = {{2.0, 0.0}, {-2.0, 0.0}};
        e.expectations = {
            expect("radius.min_r@vertices", 0.5, 0.05, "evolute cusp at distance b^2/a = 1/2"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "ghomi";
        e.summary = "surface z^3 = x y (x^4 + y^4); medial axis approaches the origin "
                    "although the tangent cone there is the (convex) plane z = 0";
        e.descriptor = make_implicit("z^3 - x*y*(x^4 + y^4)", 3, DomainBox::cube(3, -1.0, 1.0));
        e.interest_points = {{0.0, 0.0, 0.0}, {0.0, 0.5, 0.0}};
        e.expectations = {
            expect("cone.convex@(0,0,0)", 1.0, 0.5,
                   "surface tilt at radius r is asin(0.63 r), a plane in the limit"),
            expect("liminf.flagged@(0,0,0)", 1.0, 0.5,
                   "local cones along the x axis exclude e2 by ~0.8 rad at ring scale"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "halfline";
        e.summary = "segment [-1,0] on the x axis; no medial points near the endpoint";
        e.descriptor = make_graph({"0"}, 2, box1(-1.0, 0.0));
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("reach.detections@(0,0)", 0.0, 0.5,
                   "every point off a segment has a unique foot"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "kontrsuperq";
        e.summary = "graph of the wedge function: 0 for x <= 0, 2x^2|y| - x^5 above |y| >= x^3, "
                    "y^2/x below; cubic growth yet reached along (t, 0, t)";
        e.descriptor = make_piecewise({{"0 - x", "0"},
                                       {"abs(y) - x^3", "2*x^2*abs(y) - x^5"},
                                       {"1", "y^2 / x"}},
                                      3, box2(-0.55, 0.55, -0.55, 0.55));
        e.interest_points = {{0.0, 0.0, 0.0}, {0.2, 0.0, 0.2}};
        e.expectations = {
            expect("sq.alpha@(0,0,0)", 3.0, 0.5,
                   "max of 2 cos^2 t sin t on the circle gives g(eps) = 0.7698 eps^3; the "
                   "one-sided bump tilts any finite-scale tangent frame, biasing the fit low"),
            expect("reach.c0@(0,0,0)", 0.0, 0.025,
                   "bisector sheet over the ridge: inner envelope theta ~ 4 c^2 extrapolates to 0"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "parabola";
        e.summary = "parabola y = x^2; medial axis is the ray above the focal point (0, 1/2)";
        e.descriptor = make_graph({"x^2"}, 2, box1(-1.0, 1.0));
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("reach.delta_sep@(0,0)", 0.5, 0.02,
                   "evolute endpoint: centers of curvature start at y = 1/(2 kappa) = 1/2"),
            expect("radius.r@(0,0)", 0.5, 0.05, "osculating radius at the vertex"),
            expect("sq.alpha@(0,0)", 2.0, 0.1, "exact quadratic growth"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "plane";
        e.summary = "plane z = 0 patch; convex tangent cones, no medial set";
        e.descriptor = make_graph({"0"}, 3, box2(-1.0, 1.0, -1.0, 1.0));
        e.interest_points = {{0.0, 0.0, 0.0}};
        e.expectations = {
            expect("cone.convex@(0,0,0)", 1.0, 0.5, "tangent cone is the plane itself"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "sphere";
        e.summary = "unit sphere; medial set is the center";
        e.descriptor = make_implicit("x^2 + y^2 + z^2 - 1", 3, DomainBox::cube(3, -1.2, 1.2));
        e.interest_points = {{1.0, 0.0, 0.0}};
        e.expectations = {
            expect("radius.r@(1,0,0)", 1.0, 0.05, "center of curvature at distance 1"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "sq_curve_3d";
        e.summary = "space curve (t, t^2, |t|^(3/2)); superquadratic normal growth";
        e.descriptor = make_parametric({"t", "t^2", "pow(abs(t), 1.5)"}, 3, -1.0, 1.0);
        e.interest_points = {{0.0, 0.0, 0.0}};
        e.expectations = {
            expect("sq.alpha@(0,0,0)", 1.5, 0.05,
                   "normal deviation sqrt(t^4 + |t|^3) ~ |t|^(3/2)"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "trabka";
        e.summary = "trumpet union: funnel z = (x^2+y^2)^(1/3) together with the z axis";
        e.descriptor = make_union({make_graph({"cbrt(x^2 + y^2)"}, 3, box2(-1.0, 1.0, -1.0, 1.0)),
                                   make_parametric({"0", "0", "t"}, 3, -1.0, 1.0)});
        e.interest_points = {{0.0, 0.0, 0.0}};
        e.expectations = {
            expect("reach.slope@(0,0,0)", 2.0 / 3.0, 0.2,
                   "axis-to-wall sheet: the floor tracks the 2/3-power wall profile"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "trabka_gamma";
        e.summary = "trumpet funnel z = (x^2+y^2)^(1/3) alone; monotone extension of the "
                    "profile curve, reached at the tip";
        e.descriptor = make_graph({"cbrt(x^2 + y^2)"}, 3, box2(-1.0, 1.0, -1.0, 1.0));
        e.interest_points = {{0.0, 0.0, 0.0}};
        e.expectations = {
            expect("reach.slope@(0,0,0)", 2.0 / 3.0, 0.2,
                   "in-funnel axis: onset height scales with the 2/3-power wall profile"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "two_points";
        e.summary = "point pair {(-1,0), (1,0)}; medial axis is the bisector line";
        e.descriptor = make_points({{-1.0, 0.0}, {1.0, 0.0}}, DomainBox::cube(2, -1.5, 1.5));
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("oracle.medial_max_abs_x", 0.0, 1e-9, "exact bisector x = 0"),
        };
        out.push_back(std::move(e));
    }
    {
        CorpusEntry e;
        e.id = "x2sgnx";
        e.summary = "inflection curve y = x^2 sign(x); quadratic growth, separated";
        e.descriptor = make_graph({"x^2 * sign(x)"}, 2, box1(-1.0, 1.0));
        e.interest_points = {{0.0, 0.0}};
        e.expectations = {
            expect("sq.superquadratic@(0,0)", 0.0, 0.5,
                   "odd quadratic growth; the signed chord tilts the finite-scale frame, so "
                   "the exponent fit is rejected by its residual rather than pinned at 2"),
            expect("reach.delta_sep@(0,0)", 0.5, 0.15,
                   "centers of curvature at (0, +/- 1/2) bound the medial set away; the "
                   "detector sees the branch only once a second interior foot exists, which "
                   "censors the onset upward by roughly h^(2/3)"),
        };
        out.push_back(std::move(e));
    }

    std::sort(out.begin(), out.end(),
              [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
    return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = build_corpus();
    return entries;
}

const CorpusEntry& corpus_entry(const std::string& id) {
    for (const CorpusEntry& e : corpus())
        if (e.id == id) return e;
    throw CorpusError("unknown corpus id '" + id + "'");
}

SetDescriptor resolve_set_argument(const std::string& arg) {
    const std::string prefix = "corpus:";
    if (arg.rfind(prefix, 0) == 0) return corpus_entry(arg.substr(prefix.size())).descriptor;
    return load_descriptor_file(arg);
}

std::vector<OracleMedialPoint> oracle_bruteforce_medial(const SetDescriptor& desc,
                                                        const DomainBox& query_box, double fine_h,
                                                        double theta_min) {
    if (fine_h <= 0) throw CorpusError("oracle requires fine_h > 0");
    const std::size_t n = query_box.dim();
    if (n == 0) throw CorpusError("oracle requires a query box");

    std::vector<std::int64_t> counts(n);
    double total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        counts[i] = static_cast<std::int64_t>(std::floor(query_box.extent(i) / fine_h)) + 1;
        total *= static_cast<double>(counts[i]);
    }
    if (total > 1e7) throw CorpusError("oracle grid exceeds 1e7 nodes");

    SamplingConfig cfg;
    cfg.h = fine_h;
    cfg.tau_res = fine_h / 10;
    SampledSet cloud = sample_set(desc, cfg);
    const std::size_t m = cloud.size();
    double max_residual = 0;
    for (double r : cloud.residuals) max_residual = std::max(max_residual, r);
    const double link = 3 * fine_h;

    std::vector<OracleMedialPoint> out;
    std::vector<std::int64_t> idx(n, 0);
    std::vector<std::size_t> feet;
    for (;;) {
        Vec node(n);
        for (std::size_t i = 0; i < n; ++i)
            node[i] = query_box.lo(i) + fine_h * static_cast<double>(idx[i]);

        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) d = std::min(d, dist(node, cloud.points[j]));
        if (d > 3 * fine_h && std::isfinite(d)) {
            // Candidate feet are the local minima of the distance to the node
            // along the sample adjacency graph. A plain slab cannot serve both
            // uses: a tight one misses bisector branches that run between
            // lattice columns, a wide one bridges the feet of a just-opened
            // branch through the vertex between them.
            const double pool = d + 2 * fine_h + 2 * max_residual;
            feet.clear();
            for (std::size_t j = 0; j < m; ++j)
                if (dist(node, cloud.points[j]) <= pool) feet.push_back(j);

            std::vector<std::size_t> minima;
            for (std::size_t a : feet) {
                double da = dist(node, cloud.points[a]);
                bool is_min = true;
                for (std::size_t b : feet) {
                    if (b == a || dist(cloud.points[a], cloud.points[b]) > link) continue;
                    double db = dist(node, cloud.points[b]);
                    if (db < da || (db == da && lex_less(cloud.points[b], cloud.points[a]))) {
                        is_min = false;
                        break;
                    }
                }
                if (is_min) minima.push_back(a);
            }

            // Single-linkage clusters (minima sets are small; quadratic is fine).
            std::vector<int> label(minima.size(), -1);
            int clusters = 0;
            std::vector<std::size_t> stack;
            for (std::size_t s = 0; s < minima.size(); ++s) {
                if (label[s] >= 0) continue;
                label[s] = clusters;
                stack.assign(1, s);
                while (!stack.empty()) {
                    std::size_t a = stack.back();
                    stack.pop_back();
                    for (std::size_t b = 0; b < minima.size(); ++b) {
                        if (label[b] < 0 &&
                            dist(cloud.points[minima[a]], cloud.points[minima[b]]) <= link) {
                            label[b] = clusters;
                            stack.push_back(b);
                        }
                    }
                }
                ++clusters;
            }

            // Representative per cluster: nearest member, lex tie-break.
            std::vector<std::size_t> reps;
            for (int cl = 0; cl < clusters; ++cl) {
                std::size_t best = minima.size();
                for (std::size_t a = 0; a < minima.size(); ++a) {
                    if (label[a] != cl) continue;
                    if (best == minima.size()) {
                        best = a;
                        continue;
                    }
                    double da = dist(node, cloud.points[minima[a]]);
                    double db = dist(node, cloud.points[minima[best]]);
                    if (da < db ||
                        (da == db && lex_less(cloud.points[minima[a]], cloud.points[minima[best]])))
                        best = a;
                }
                if (best < minima.size()) reps.push_back(minima[best]);
            }
            std::sort(reps.begin(), reps.end(), [&](std::size_t a, std::size_t b) {
                double da = dist(node, cloud.points[a]);
                double db = dist(node, cloud.points[b]);
                if (da != db) return da < db;
                return lex_less(cloud.points[a], cloud.points[b]);
            });

            // A node within half a lattice cell of a true bisector point sees
            // the farther foot at most 2 sin(theta/2) (sqrt(n)/2) fine_h
            // beyond the nearer one; a larger defect means the bisector runs
            // closer to some other node.
            std::vector<std::size_t> accepted;
            for (std::size_t r : reps) {
                if (accepted.empty()) {
                    accepted.push_back(r);
                    continue;
                }
                double defect = dist(node, cloud.points[r]) - d;
                double th = angle_between(cloud.points[r] - node,
                                          cloud.points[accepted[0]] - node);
                double allow = std::sin(th / 2) * std::sqrt(static_cast<double>(n)) * fine_h +
                               2 * max_residual;
                if (defect <= allow) accepted.push_back(r);
            }

            bool boundary = false;
            for (std::size_t r : accepted)
                if (cloud.boundary_flags[r]) boundary = true;

            std::vector<Vec> dirs;
            dirs.reserve(feet.size());
            for (std::size_t j : feet) {
                Vec u = cloud.points[j] - node;
                double len = norm(u);
                if (len > 0) dirs.push_back((1.0 / len) * u);
            }

            double theta = 0;
            if (directions_wrap(dirs, n)) {
                theta = 3.14159265358979323846;
            } else {
                for (std::size_t a = 0; a < accepted.size(); ++a)
                    for (std::size_t b = a + 1; b < accepted.size(); ++b)
                        theta = std::max(theta, angle_between(cloud.points[accepted[a]] - node,
                                                              cloud.points[accepted[b]] - node));
            }

            if (!boundary && theta >= theta_min) {
                OracleMedialPoint p;
                p.node = node;
                p.d = d;
                p.theta_sep = theta;
                out.push_back(p);
            }
        }

        std::size_t axis = 0;
        while (axis < n && ++idx[axis] >= counts[axis]) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == n) break;
    }
    return out;
}

}  // namespace medialkit
