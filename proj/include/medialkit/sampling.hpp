#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "medialkit/set_model.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SamplingConfig {
    double h = 0.01;       // target sample spacing (model units)
    double tau_res = 1e-8; // membership residual bound; must be <= h/10
    DomainBox box;         // empty -> descriptor's own domain
    int max_projection_iters = 50;
    double ladder_factor = 0.5;
    int ladder_depth = 3;

    SamplingConfig with_h(double new_h) const {
        SamplingConfig c = *this;
        c.h = new_h;
        return c;
    }
};

// Point-cloud discretization of a set. Points are sorted lexicographically
// and deduplicated at h/4; boundary_flags marks points generated within 2h of
// the sampling box boundary (used to suppress clipping artifacts downstream).
struct SampledSet {
    std::vector<Vec> points;
    std::vector<int> member_tags;        // union member index; 0 otherwise
    std::vector<double> residuals;
    std::vector<std::uint8_t> boundary_flags;
    double h = 0;
    double tau_res = 0;  // achieved residual bound (max over stored points)
    SetDescriptor descriptor;
    DomainBox box;  // base-variable box actually sampled (ambient for implicit)

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? descriptor.ambient_dim : points[0].size(); }
};

// Kind dispatch. Union members are sampled over their own declared domains
// and merged with member tags; cfg.box overrides the domain for non-union
// descriptors when its dimension matches the base dimension.
SampledSet sample_set(const SetDescriptor& desc, const SamplingConfig& cfg);

// Uniform base grid of spacing h/sqrt(k) plus adaptive cell subdivision where
// the ambient image of a cell exceeds the target spacing (steep graphs).
SampledSet sample_graph(const SetDescriptor& desc, const SamplingConfig& cfg);

// Seed grid + damped Newton projection along central-difference gradients
// (step h/100, capture band max(10h|grad|, 1e-6)).
SampledSet sample_implicit(const SetDescriptor& desc, const SamplingConfig& cfg);

SampledSet sample_parametric(const SetDescriptor& desc, const SamplingConfig& cfg);

// SampledSets at h, h*factor, ..., each independently valid.
std::vector<SampledSet> refinement_ladder(const SetDescriptor& desc, const SamplingConfig& cfg);

// CSV: one point per row, columns x1..xn, residual, member_tag.
void write_csv(const SampledSet& s, std::ostream& out);

// Exact geometric transforms of the stored cloud, for equivariance tests.
// Scaling keeps the descriptor; rotation replaces it with a PointSet.
SampledSet scale_sampled(const SampledSet& s, double lambda);
SampledSet rotate_sampled(const SampledSet& s, const std::vector<std::vector<double>>& rot);

}  // namespace medialkit
