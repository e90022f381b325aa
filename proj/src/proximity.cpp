#include "medialkit/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "medialkit/numerics.hpp"

namespace medialkit {

namespace {
constexpr std::size_t kLeafSize = 16;
}

KdTree::KdTree(const std::vector<Vec>& points) : pts_(points) {
    if (pts_.empty()) throw ProximityError("kd-tree over empty cloud");
    order_.resize(pts_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * pts_.size() / kLeafSize + 4);
    root_ = build(0, pts_.size());
}

std::int32_t KdTree::build(std::size_t begin, std::size_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    std::size_t n = pts_[0].size();
    if (end - begin <= kLeafSize) {
        node.axis = 0;
        node.split = 0;
        nodes_.push_back(node);
        return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    std::size_t axis = 0;
    double widest = -1;
    for (std::size_t ax = 0; ax < n; ++ax) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = begin; i < end; ++i) {
            lo = std::min(lo, pts_[order_[i]][ax]);
            hi = std::max(hi, pts_[order_[i]][ax]);
        }
        if (hi - lo > widest) {
            widest = hi - lo;
            axis = ax;
        }
    }
    std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                         if (pts_[a][axis] != pts_[b][axis]) return pts_[a][axis] < pts_[b][axis];
                         return a < b;
                     });
    node.axis = axis;
    node.split = pts_[order_[mid]][axis];
    nodes_.push_back(node);
    auto self = static_cast<std::int32_t>(nodes_.size() - 1);
    std::int32_t left = build(begin, mid);
    std::int32_t right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
}

void KdTree::search_nearest(std::int32_t ni, const Vec& q, Hit& best, double& best2) const {
    const Node& node = nodes_[ni];
    if (node.left < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            std::size_t idx = order_[i];
            double d2 = dist2(q, pts_[idx]);
            bool take = d2 < best2;
            if (!take && d2 == best2 && best.index != idx) {
                if (lex_less(pts_[idx], pts_[best.index]) ||
                    (pts_[idx] == pts_[best.index] && idx < best.index))
                    take = true;
            }
            if (take) {
                best2 = d2;
                best.index = idx;
            }
        }
        return;
    }
    double delta = q[node.axis] - node.split;
    std::int32_t first = delta < 0 ? node.left : node.right;
    std::int32_t second = delta < 0 ? node.right : node.left;
    search_nearest(first, q, best, best2);
    if (delta * delta <= best2) search_nearest(second, q, best, best2);
}

KdTree::Hit KdTree::nearest(const Vec& q) const {
    Hit best;
    best.index = order_[0];
    double best2 = dist2(q, pts_[best.index]);
    search_nearest(root_, q, best, best2);
    best.dist = std::sqrt(best2);
    return best;
}

void KdTree::search_radius(std::int32_t ni, const Vec& q, double r2,
                           std::vector<std::size_t>& out) const {
    const Node& node = nodes_[ni];
    if (node.left < 0) {
        for (std::size_t i = node.begin; i < node.end; ++i) {
            std::size_t idx = order_[i];
            if (dist2(q, pts_[idx]) <= r2) out.push_back(idx);
        }
        return;
    }
    double delta = q[node.axis] - node.split;
    if (delta < 0 || delta * delta <= r2) search_radius(node.left, q, r2, out);
    if (delta >= 0 || delta * delta <= r2) search_radius(node.right, q, r2, out);
}

std::vector<std::size_t> KdTree::radius_search(const Vec& q, double r) const {
    std::vector<std::size_t> out;
    radius_search_into(q, r, out);
    return out;
}

void KdTree::radius_search_into(const Vec& q, double r, std::vector<std::size_t>& out) const {
    out.clear();
    if (r < 0) return;
    search_radius(root_, q, r * r, out);
    std::sort(out.begin(), out.end());
}

double distance_to_set(const KdTree& tree, const Vec& a) { return tree.nearest(a).dist; }

KdTree::Hit nearest_point(const KdTree& tree, const Vec& a) { return tree.nearest(a); }

NearSet near_set(const KdTree& tree, const Vec& a, double eps_near, double h) {
    if (eps_near < 2 * h) throw ProximityError("near-set slack must be at least 2h");
    NearSet ns;
    ns.d = distance_to_set(tree, a);
    ns.members = tree.radius_search(a, ns.d + eps_near);
    if (ns.members.size() < 2) return ns;

    std::vector<Vec> dirs;
    dirs.reserve(ns.members.size());
    for (std::size_t idx : ns.members) {
        Vec dir = tree.point(idx) - a;
        double len = norm(dir);
        if (len > 0) dirs.push_back((1.0 / len) * dir);
    }
    if (dirs.size() > 64) {
        auto keep = farthest_direction_subsample(dirs, 64);
        std::vector<Vec> sub;
        sub.reserve(keep.size());
        for (std::size_t k : keep) sub.push_back(dirs[k]);
        dirs.swap(sub);
    }
    double worst = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            worst = std::max(worst, angle_between(dirs[i], dirs[j]));
    ns.angular_diameter = worst;
    return ns;
}

}  // namespace medialkit
