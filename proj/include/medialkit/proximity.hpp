#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "medialkit/sampling.hpp"
#include "medialkit/vec.hpp"

namespace medialkit {

struct ProximityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Static kd-tree over a point cloud. Splits the widest axis at the median;
// ties broken by (coordinate, index) so construction and queries are
// deterministic for any input order.
class KdTree {
   public:
    KdTree() = default;
    explicit KdTree(const std::vector<Vec>& points);

    std::size_t size() const { return pts_.size(); }
    const Vec& point(std::size_t i) const { return pts_[i]; }

    // Nearest point: smallest distance, then lexicographically smallest
    // point, then smallest index.
    struct Hit {
        std::size_t index = 0;
        double dist = 0;
    };
    Hit nearest(const Vec& q) const;

    // All indices with dist(q, p_i) <= r, ascending by index.
    std::vector<std::size_t> radius_search(const Vec& q, double r) const;

    // Same result written into a caller-owned buffer, so scan loops do not
    // allocate per query.
    void radius_search_into(const Vec& q, double r, std::vector<std::size_t>& out) const;

   private:
    struct Node {
        std::size_t begin, end;  // range in order_
        std::size_t axis;
        double split;
        std::int32_t left = -1, right = -1;
    };
    std::vector<Vec> pts_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;

    std::int32_t build(std::size_t begin, std::size_t end);
    void search_nearest(std::int32_t node, const Vec& q, Hit& best, double& best2) const;
    void search_radius(std::int32_t node, const Vec& q, double r2,
                       std::vector<std::size_t>& out) const;
};

// Foot points of a at distance <= d(a) + eps_near, with the maximum pairwise
// angle between the directions from a to those feet.
struct NearSet {
    double d = 0;                      // distance from a to the cloud
    std::vector<std::size_t> members;  // indices into the cloud, ascending
    double angular_diameter = 0;       // radians; 0 when a single member
};

// Distance from a to the sampled set.
double distance_to_set(const KdTree& tree, const Vec& a);

// Nearest sampled point (lexicographic tie-break).
KdTree::Hit nearest_point(const KdTree& tree, const Vec& a);

// Near-set of a at slack eps_near. Requires eps_near >= 2h: below that the
// slab can miss every sample of the true foot region. Angular diameter is
// exact up to 64 members and computed on a 64-point farthest-direction
// subsample beyond that.
NearSet near_set(const KdTree& tree, const Vec& a, double eps_near, double h);

}  // namespace medialkit
