#include "medialkit/set_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace medialkit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* kind_name(SetKind k) {
    switch (k) {
        case SetKind::Implicit: return "implicit";
        case SetKind::Graph: return "graph";
        case SetKind::ParametricCurve: return "parametric";
        case SetKind::PointSet: return "points";
        case SetKind::Union: return "union";
        case SetKind::PiecewiseGraph: return "piecewise_graph";
    }
    return "?";
}

SetKind kind_from_name(const std::string& s) {
    if (s == "implicit") return SetKind::Implicit;
    if (s == "graph") return SetKind::Graph;
    if (s == "parametric") return SetKind::ParametricCurve;
    if (s == "points") return SetKind::PointSet;
    if (s == "union") return SetKind::Union;
    if (s == "piecewise_graph") return SetKind::PiecewiseGraph;
    throw DescriptorError("unknown set kind '" + s + "'");
}

std::string expr_source(const ExpressionAst& e) { return e.source.empty() ? e.print() : e.source; }

// First matching branch index for a piecewise graph, or -1.
int matched_branch(const SetDescriptor& d, const Vec& base) {
    for (std::size_t i = 0; i < d.guards.size(); ++i)
        if (d.guards[i].evaluate(base) >= 0.0) return static_cast<int>(i);
    return -1;
}

double piecewise_value(const SetDescriptor& d, const Vec& base) {
    int i = matched_branch(d, base);
    if (i < 0) throw DescriptorError("piecewise guards do not cover point " + to_string(base));
    return d.exprs[static_cast<std::size_t>(i)].evaluate(base);
}

double parametric_residual(const SetDescriptor& d, const Vec& p) {
    const double t_lo = d.domain.lo(0), t_hi = d.domain.hi(0);
    const int kCoarse = 1024;
    double best_t = t_lo, best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kCoarse; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / kCoarse;
        double d2 = dist2(p, parametric_point(d, t));
        if (d2 < best_d2) {
            best_d2 = d2;
            best_t = t;
        }
    }
    double half = (t_hi - t_lo) / kCoarse;
    for (int iter = 0; iter < 30; ++iter) {
        double lo = std::max(t_lo, best_t - half), hi = std::min(t_hi, best_t + half);
        for (int i = 0; i <= 8; ++i) {
            double t = lo + (hi - lo) * i / 8;
            double d2 = dist2(p, parametric_point(d, t));
            if (d2 < best_d2) {
                best_d2 = d2;
                best_t = t;
            }
        }
        half /= 4;
    }
    return std::sqrt(best_d2);
}

}  // namespace

double DomainBox::diameter() const {
    double s = 0;
    for (const auto& ax : axes) s += (ax[1] - ax[0]) * (ax[1] - ax[0]);
    return std::sqrt(s);
}

bool DomainBox::contains(const Vec& p) const {
    for (std::size_t i = 0; i < dim(); ++i)
        if (p[i] < axes[i][0] || p[i] > axes[i][1]) return false;
    return true;
}

DomainBox DomainBox::scaled(double lambda) const {
    DomainBox b = *this;
    for (auto& ax : b.axes) {
        ax[0] *= lambda;
        ax[1] *= lambda;
        if (ax[0] > ax[1]) std::swap(ax[0], ax[1]);
    }
    return b;
}

DomainBox DomainBox::cube(std::size_t dim, double lo, double hi) {
    DomainBox b;
    b.axes.assign(dim, {lo, hi});
    return b;
}

std::size_t SetDescriptor::base_dim() const {
    switch (kind) {
        case SetKind::Graph: return ambient_dim - exprs.size();
        case SetKind::PiecewiseGraph: return ambient_dim - 1;
        case SetKind::ParametricCurve: return 1;
        default: return ambient_dim;
    }
}

SetDescriptor descriptor_from_json(const json& j) {
    if (!j.is_object()) throw DescriptorError("set definition must be a JSON object");
    if (!j.contains("kind")) throw DescriptorError("set definition lacks 'kind'");
    SetDescriptor d;
    d.kind = kind_from_name(j.at("kind").get<std::string>());

    if (d.kind == SetKind::Union) {
        if (!j.contains("members") || !j.at("members").is_array() || j.at("members").empty())
            throw DescriptorError("union requires a nonempty 'members' array");
        for (const auto& m : j.at("members")) d.members.push_back(descriptor_from_json(m));
        d.ambient_dim = d.members[0].ambient_dim;
    } else if (d.kind == SetKind::PointSet) {
        if (!j.contains("points") || !j.at("points").is_array() || j.at("points").empty())
            throw DescriptorError("point set requires a nonempty 'points' array");
        for (const auto& row : j.at("points")) {
            std::vector<double> xs = row.get<std::vector<double>>();
            d.points.push_back(Vec::from(xs));
        }
        d.ambient_dim =
            j.contains("ambient_dim") ? j.at("ambient_dim").get<std::size_t>() : d.points[0].size();
    } else {
        if (!j.contains("ambient_dim")) throw DescriptorError("set definition lacks 'ambient_dim'");
        d.ambient_dim = j.at("ambient_dim").get<std::size_t>();
        if (!j.contains("exprs") || !j.at("exprs").is_array() || j.at("exprs").empty())
            throw DescriptorError("set definition lacks 'exprs'");
        for (const auto& s : j.at("exprs")) {
            try {
                d.exprs.push_back(parse_expression(s.get<std::string>()));
            } catch (const ParseError& e) {
                throw DescriptorError(std::string("bad expression '") + s.get<std::string>() +
                                      "': " + e.what());
            }
        }
        if (d.kind == SetKind::PiecewiseGraph) {
            if (!j.contains("guards"))
                throw DescriptorError("piecewise_graph requires 'guards'");
            for (const auto& s : j.at("guards")) {
                try {
                    d.guards.push_back(parse_expression(s.get<std::string>()));
                } catch (const ParseError& e) {
                    throw DescriptorError(std::string("bad guard '") + s.get<std::string>() +
                                          "': " + e.what());
                }
            }
            if (d.guards.size() != d.exprs.size())
                throw DescriptorError("piecewise_graph guards/exprs length mismatch");
        }
    }

    if (j.contains("domain")) {
        for (const auto& ax : j.at("domain")) {
            std::vector<double> lh = ax.get<std::vector<double>>();
            if (lh.size() != 2) throw DescriptorError("domain axis must be [lo, hi]");
            d.domain.axes.push_back({lh[0], lh[1]});
        }
    } else {
        d.domain = DomainBox::cube(d.base_dim(), -1.0, 1.0);
    }
    validate_descriptor(d);
    return d;
}

ordered_json descriptor_to_json(const SetDescriptor& d) {
    ordered_json j;
    j["kind"] = kind_name(d.kind);
    j["ambient_dim"] = d.ambient_dim;
    if (!d.exprs.empty()) {
        ordered_json ex = ordered_json::array();
        for (const auto& e : d.exprs) ex.push_back(expr_source(e));
        j["exprs"] = ex;
    }
    if (!d.guards.empty()) {
        ordered_json g = ordered_json::array();
        for (const auto& e : d.guards) g.push_back(expr_source(e));
        j["guards"] = g;
    }
    if (d.kind != SetKind::Union) {
        ordered_json dom = ordered_json::array();
        for (const auto& ax : d.domain.axes) dom.push_back(ordered_json::array({ax[0], ax[1]}));
        j["domain"] = dom;
    }
    if (!d.points.empty()) {
        ordered_json pts = ordered_json::array();
        for (const auto& p : d.points) pts.push_back(p.to_vector());
        j["points"] = pts;
    }
    if (!d.members.empty()) {
        ordered_json ms = ordered_json::array();
        for (const auto& m : d.members) ms.push_back(descriptor_to_json(m));
        j["members"] = ms;
    }
    return j;
}

SetDescriptor load_descriptor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DescriptorError("no such file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DescriptorError("invalid JSON in " + path + ": " + e.what());
    }
    return descriptor_from_json(j);
}

SetDescriptor make_implicit(const std::string& expr, std::size_t ambient_dim, DomainBox box) {
    SetDescriptor d;
    d.kind = SetKind::Implicit;
    d.ambient_dim = ambient_dim;
    d.exprs.push_back(parse_expression(expr));
    d.domain = std::move(box);
    validate_descriptor(d);
    return d;
}

SetDescriptor make_graph(const std::vector<std::string>& exprs, std::size_t ambient_dim,
                         DomainBox base_box) {
    SetDescriptor d;
    d.kind = SetKind::Graph;
    d.ambient_dim = ambient_dim;
    for (const auto& s : exprs) d.exprs.push_back(parse_expression(s));
    d.domain = std::move(base_box);
    validate_descriptor(d);
    return d;
}

SetDescriptor make_parametric(const std::vector<std::string>& exprs, std::size_t ambient_dim,
                              double t_lo, double t_hi) {
    SetDescriptor d;
    d.kind = SetKind::ParametricCurve;
    d.ambient_dim = ambient_dim;
    for (const auto& s : exprs) d.exprs.push_back(parse_expression(s));
    d.domain.axes.push_back({t_lo, t_hi});
    validate_descriptor(d);
    return d;
}

SetDescriptor make_points(std::vector<Vec> pts, DomainBox box) {
    SetDescriptor d;
    d.kind = SetKind::PointSet;
    d.ambient_dim = pts.empty() ? 0 : pts[0].size();
    d.points = std::move(pts);
    d.domain = std::move(box);
    validate_descriptor(d);
    return d;
}

SetDescriptor make_union(std::vector<SetDescriptor> members) {
    SetDescriptor d;
    d.kind = SetKind::Union;
    d.ambient_dim = members.empty() ? 0 : members[0].ambient_dim;
    d.members = std::move(members);
    d.domain = DomainBox::cube(d.ambient_dim, -1.0, 1.0);
    validate_descriptor(d);
    return d;
}

SetDescriptor make_piecewise(const std::vector<std::pair<std::string, std::string>>& branches,
                             std::size_t ambient_dim, DomainBox base_box) {
    SetDescriptor d;
    d.kind = SetKind::PiecewiseGraph;
    d.ambient_dim = ambient_dim;
    for (const auto& [guard, value] : branches) {
        d.guards.push_back(parse_expression(guard));
        d.exprs.push_back(parse_expression(value));
    }
    d.domain = std::move(base_box);
    validate_descriptor(d);
    return d;
}

std::vector<double> graph_values(const SetDescriptor& d, const Vec& base) {
    if (d.kind == SetKind::PiecewiseGraph) return {piecewise_value(d, base)};
    std::vector<double> vals;
    vals.reserve(d.exprs.size());
    for (const auto& e : d.exprs) vals.push_back(e.evaluate(base));
    return vals;
}

Vec graph_point(const SetDescriptor& d, const Vec& base) {
    Vec p(d.ambient_dim);
    std::size_t k = d.base_dim();
    for (std::size_t i = 0; i < k; ++i) p[i] = base[i];
    std::vector<double> vals = graph_values(d, base);
    for (std::size_t i = 0; i < vals.size(); ++i) p[k + i] = vals[i];
    return p;
}

Vec parametric_point(const SetDescriptor& d, double t) {
    Vec arg{t};
    Vec p(d.ambient_dim);
    for (std::size_t i = 0; i < d.exprs.size(); ++i) p[i] = d.exprs[i].evaluate(arg);
    return p;
}

double membership_residual(const SetDescriptor& d, const Vec& point) {
    if (point.size() != d.ambient_dim)
        throw DescriptorError("membership_residual: point dimension mismatch");
    switch (d.kind) {
        case SetKind::Implicit: return std::fabs(d.exprs[0].evaluate(point));
        case SetKind::Graph:
        case SetKind::PiecewiseGraph: {
            std::size_t k = d.base_dim();
            Vec base(k);
            for (std::size_t i = 0; i < k; ++i) base[i] = point[i];
            std::vector<double> vals = graph_values(d, base);
            double s = 0;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                double diff = point[k + i] - vals[i];
                s += diff * diff;
            }
            return std::sqrt(s);
        }
        case SetKind::ParametricCurve: return parametric_residual(d, point);
        case SetKind::PointSet: {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : d.points) best = std::min(best, dist(point, q));
            return best;
        }
        case SetKind::Union: {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& m : d.members) best = std::min(best, membership_residual(m, point));
            return best;
        }
    }
    throw DescriptorError("membership_residual: unknown kind");
}

namespace {

// Walks a regular grid over the base box, calling fn(node).
template <typename F>
void for_grid(const DomainBox& box, int per_axis, F&& fn) {
    std::size_t k = box.dim();
    std::vector<int> idx(k, 0);
    for (;;) {
        Vec p(k);
        for (std::size_t i = 0; i < k; ++i)
            p[i] = box.lo(i) + box.extent(i) * idx[i] / per_axis;
        fn(p);
        std::size_t axis = 0;
        while (axis < k && ++idx[axis] > per_axis) {
            idx[axis] = 0;
            ++axis;
        }
        if (axis == k) break;
    }
}

void validate_piecewise(const SetDescriptor& d, double tau_glue) {
    std::size_t k = d.base_dim();
    int per_axis = k <= 1 ? 256 : (k == 2 ? 64 : 16);
    // Coverage: every grid node must match a branch.
    for_grid(d.domain, per_axis, [&](const Vec& p) {
        if (matched_branch(d, p) < 0)
            throw DescriptorError("piecewise guards do not cover the domain near " + to_string(p));
    });
    // Seam continuity: where the matched branch changes along a grid edge,
    // bisect to the seam and compare one-sided values.
    double scale = 0.0;
    for_grid(d.domain, per_axis, [&](const Vec& p) {
        scale = std::max(scale, std::fabs(piecewise_value(d, p)));
    });
    for (std::size_t axis = 0; axis < k; ++axis) {
        double step = d.domain.extent(axis) / per_axis;
        if (step <= 0) continue;
        for_grid(d.domain, per_axis, [&](const Vec& p) {
            Vec q = p;
            q[axis] += step;
            if (q[axis] > d.domain.hi(axis) + 1e-12) return;
            if (matched_branch(d, p) == matched_branch(d, q)) return;
            Vec a = p, b = q;
            for (int iter = 0; iter < 60; ++iter) {
                Vec mid = a;
                mid[axis] = 0.5 * (a[axis] + b[axis]);
                if (matched_branch(d, mid) == matched_branch(d, a))
                    a = mid;
                else
                    b = mid;
            }
            double va = piecewise_value(d, a), vb = piecewise_value(d, b);
            if (std::fabs(va - vb) > tau_glue * (1.0 + scale))
                throw DescriptorError("piecewise branches disagree at a seam near " + to_string(a) +
                                      ": " + std::to_string(va) + " vs " + std::to_string(vb));
        });
    }
}

}  // namespace

void validate_descriptor(const SetDescriptor& d, double tau_glue) {
    if (d.ambient_dim < 1 || d.ambient_dim > Vec::kMaxDim)
        throw DescriptorError("ambient dimension out of range");
    if (d.kind == SetKind::Union) {
        for (const auto& m : d.members) {
            if (m.ambient_dim != d.ambient_dim)
                throw DescriptorError("union members disagree on ambient dimension");
            validate_descriptor(m, tau_glue);
        }
        return;
    }
    if (d.kind == SetKind::PointSet) {
        if (d.points.empty()) throw DescriptorError("empty point set");
        for (const auto& p : d.points)
            if (p.size() != d.ambient_dim) throw DescriptorError("point dimension mismatch");
        return;
    }
    std::size_t k = d.base_dim();
    if (d.kind == SetKind::Graph && d.exprs.size() >= d.ambient_dim)
        throw DescriptorError("graph needs fewer component functions than ambient dimensions");
    if (d.domain.dim() != k)
        throw DescriptorError("domain box dimension " + std::to_string(d.domain.dim()) +
                              " does not match base dimension " + std::to_string(k));
    for (const auto& ax : d.domain.axes)
        if (!(ax[0] < ax[1]) || !std::isfinite(ax[0]) || !std::isfinite(ax[1]))
            throw DescriptorError("domain box must be nonempty and finite");
    std::size_t var_dim = (d.kind == SetKind::Implicit) ? d.ambient_dim : k;
    for (const auto& e : d.exprs)
        if (e.min_dimension() > var_dim)
            throw DescriptorError("expression uses more variables than the descriptor provides");
    for (const auto& g : d.guards)
        if (g.min_dimension() > var_dim)
            throw DescriptorError("guard uses more variables than the descriptor provides");

    if (d.kind == SetKind::PiecewiseGraph) {
        validate_piecewise(d, tau_glue);
    } else if (d.kind == SetKind::Graph || d.kind == SetKind::ParametricCurve) {
        // Totality on the declared box.
        int per_axis = k <= 1 ? 256 : (k == 2 ? 64 : 16);
        try {
            for_grid(d.domain, per_axis, [&](const Vec& p) {
                if (d.kind == SetKind::Graph)
                    (void)graph_values(d, p);
                else
                    (void)parametric_point(d, p[0]);
            });
        } catch (const EvalError& e) {
            throw DescriptorError(std::string("expression not total on the domain box: ") +
                                  e.what());
        }
    }
}

}  // namespace medialkit
