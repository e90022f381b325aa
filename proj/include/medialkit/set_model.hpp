#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "medialkit/expr.hpp"
#include "medialkit/vec.hpp"

#include "json.hpp"

namespace medialkit {

// Closed axis-aligned box bounding the region of analysis. For graph-like
// descriptors the box lives in the base variables; for parametric curves it
// is the parameter interval.
struct DomainBox {
    std::vector<std::array<double, 2>> axes;

    std::size_t dim() const { return axes.size(); }
    double lo(std::size_t i) const { return axes[i][0]; }
    double hi(std::size_t i) const { return axes[i][1]; }
    double extent(std::size_t i) const { return axes[i][1] - axes[i][0]; }
    double diameter() const;
    bool contains(const Vec& p) const;  // checks the first dim() coordinates
    DomainBox scaled(double lambda) const;

    static DomainBox cube(std::size_t dim, double lo, double hi);
};

enum class SetKind { Implicit, Graph, ParametricCurve, PointSet, Union, PiecewiseGraph };

// Symbolic definition of the analyzed set X. The variant decides how the
// expression lists are read:
//   Implicit        exprs = {f},  X = {p : f(p) = 0} in ambient_dim
//   Graph           exprs = f_1..f_{n-k} over k base vars, X = {(x, f(x))}
//   ParametricCurve exprs = n component functions of one parameter
//   PointSet        points listed explicitly
//   Union           members listed explicitly
//   PiecewiseGraph  scalar graph over k = n-1 base vars; branch i applies
//                   where guards[i] >= 0, first match wins, and only the
//                   matched branch's value expression is ever evaluated
struct SetDescriptor {
    SetKind kind = SetKind::Implicit;
    std::size_t ambient_dim = 0;
    std::vector<ExpressionAst> exprs;
    std::vector<ExpressionAst> guards;
    std::vector<Vec> points;
    std::vector<SetDescriptor> members;
    DomainBox domain;

    std::size_t base_dim() const;
};

class DescriptorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SetDescriptor descriptor_from_json(const nlohmann::json& j);
nlohmann::ordered_json descriptor_to_json(const SetDescriptor& d);
SetDescriptor load_descriptor_file(const std::string& path);

// Constructors used by the corpus and tests.
SetDescriptor make_implicit(const std::string& expr, std::size_t ambient_dim, DomainBox box);
SetDescriptor make_graph(const std::vector<std::string>& exprs, std::size_t ambient_dim,
                         DomainBox base_box);
SetDescriptor make_parametric(const std::vector<std::string>& exprs, std::size_t ambient_dim,
                              double t_lo, double t_hi);
SetDescriptor make_points(std::vector<Vec> pts, DomainBox box);
SetDescriptor make_union(std::vector<SetDescriptor> members);
SetDescriptor make_piecewise(const std::vector<std::pair<std::string, std::string>>& branches,
                             std::size_t ambient_dim, DomainBox base_box);

// Value of a graph/piecewise descriptor at a base point; for Graph returns
// all components, for PiecewiseGraph the single matched-branch value.
std::vector<double> graph_values(const SetDescriptor& d, const Vec& base);
Vec graph_point(const SetDescriptor& d, const Vec& base);
Vec parametric_point(const SetDescriptor& d, double t);

// Numeric proxy for membership: 0 iff the point satisfies the definition.
// Implicit -> |f(p)|; graph variants -> ||y - f(x)||; Union -> min over
// members; PointSet -> distance to the nearest listed point. ParametricCurve
// has no closed form in the contract; it is approximated by an adaptively
// refined parameter scan and is meant for validation, not hot loops.
double membership_residual(const SetDescriptor& d, const Vec& point);

// Structural checks: dimensions agree, expressions are total on the box,
// piecewise guards cover the base box and branches agree on guard boundaries
// within tau_glue. Throws DescriptorError on violation.
void validate_descriptor(const SetDescriptor& d, double tau_glue = 1e-7);

}  // namespace medialkit
