#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "signmap/geometry.hpp"

namespace signmap {

/// Static 3D kd-tree; median split, cycling axes. Sub-quadratic lookup for
/// the per-iteration correspondence search in ICP.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(std::vector<Vec3> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    std::vector<int> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    nodes_.reserve(points_.size());
    root_ = build(order, 0, int(order.size()), 0);
  }

  bool empty() const { return points_.empty(); }
  size_t size() const { return points_.size(); }
  const Vec3& point(int idx) const { return points_[size_t(idx)]; }

  /// Index of the nearest stored point, -1 when empty. Squared distance out.
  int nearest(const Vec3& query, double& sq_dist_out) const {
    sq_dist_out = std::numeric_limits<double>::infinity();
    int best = -1;
    if (root_ >= 0) search(root_, query, best, sq_dist_out);
    return best;
  }

 private:
  struct Node {
    int point_idx;
    int axis;
    int left = -1, right = -1;
  };

  int build(std::vector<int>& order, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    int axis = depth % 3;
    int mid = (lo + hi) / 2;
    std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                     [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
    int node_idx = int(nodes_.size());
    nodes_.push_back(Node{order[mid], axis});
    nodes_[node_idx].left = build(order, lo, mid, depth + 1);
    nodes_[node_idx].right = build(order, mid + 1, hi, depth + 1);
    return node_idx;
  }

  void search(int node_idx, const Vec3& q, int& best, double& best_sq) const {
    const Node& node = nodes_[size_t(node_idx)];
    const Vec3& p = points_[size_t(node.point_idx)];
    double d = (q - p).squaredNorm();
    if (d < best_sq) {
      best_sq = d;
      best = node.point_idx;
    }
    double delta = q[node.axis] - p[node.axis];
    int near = delta < 0.0 ? node.left : node.right;
    int far = delta < 0.0 ? node.right : node.left;
    if (near >= 0) search(near, q, best, best_sq);
    if (far >= 0 && delta * delta < best_sq) search(far, q, best, best_sq);
  }

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace signmap
