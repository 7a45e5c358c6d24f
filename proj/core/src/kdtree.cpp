#include "cograsp/kdtree.hpp"

#include <algorithm>
#include <numeric>

#include "cograsp/error.hpp"

namespace cograsp {

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points) {
  if (points_.empty()) throw ValidationError("KdTree: empty point set");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * points_.size() / kLeafSize + 8);
  root_ = build(0, static_cast<int>(points_.size()));
}

int KdTree::build(int begin, int end) {
  Node node;
  node.begin = begin;
  node.end = end;
  if (end - begin <= kLeafSize) {
    // Leaf points stay sorted by original index so scans walk in index order.
    std::sort(order_.begin() + begin, order_.begin() + end);
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  Vec3 lo = points_[order_[begin]];
  Vec3 hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    const Vec3& p = points_[order_[i]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 extent = hi - lo;
  int axis = 0;
  if (extent.y > extent[axis]) axis = 1;
  if (extent.z > extent[axis]) axis = 2;

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double va = points_[a][axis];
                     const double vb = points_[b][axis];
                     return va < vb || (va == vb && a < b);
                   });
  node.axis = axis;
  node.split = points_[order_[mid]][axis];

  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree::nearest_rec(int node_idx, const Vec3& q, Hit& best) const {
  const Node& node = nodes_[node_idx];
  if (node.axis == -1) {
    for (int i = node.begin; i < node.end; ++i) {
      const int idx = order_[i];
      const double d2 = dist_sq(q, points_[idx]);
      if (d2 < best.dist_sq || (d2 == best.dist_sq && idx < best.index)) {
        best.dist_sq = d2;
        best.index = idx;
      }
    }
    return;
  }
  const double delta = q[node.axis] - node.split;
  const int near = delta < 0.0 ? node.left : node.right;
  const int far = delta < 0.0 ? node.right : node.left;
  nearest_rec(near, q, best);
  // The far side can still hold an equal-distance, lower-index point, so only
  // prune on a strictly larger plane distance.
  if (delta * delta <= best.dist_sq) nearest_rec(far, q, best);
}

KdTree::Hit KdTree::nearest(const Vec3& q, double bound_sq) const {
  Hit best;
  best.dist_sq = bound_sq;
  best.index = static_cast<int>(points_.size());  // sentinel for tie handling
  nearest_rec(root_, q, best);
  if (best.index == static_cast<int>(points_.size())) return Hit{};
  return best;
}

std::vector<KdTree::Hit> KdTree::knn(const Vec3& q, int k) const {
  if (k <= 0) throw ValidationError("KdTree::knn: k must be positive");
  if (static_cast<size_t>(k) > points_.size())
    throw ValidationError("KdTree::knn: k exceeds point count");

  // Max-heap of the best k candidates keyed by (dist_sq, index) descending.
  auto worse = [](const Hit& a, const Hit& b) {
    return a.dist_sq < b.dist_sq || (a.dist_sq == b.dist_sq && a.index < b.index);
  };
  std::vector<Hit> heap;
  heap.reserve(static_cast<size_t>(k) + 1);

  // Iterative traversal with a manual stack; visits near side first.
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const int node_idx = stack.back();
    stack.pop_back();
    const Node& node = nodes_[node_idx];
    if (node.axis == -1) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        Hit h{idx, dist_sq(q, points_[idx])};
        if (static_cast<int>(heap.size()) < k) {
          heap.push_back(h);
          std::push_heap(heap.begin(), heap.end(), worse);
        } else if (worse(h, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), worse);
          heap.back() = h;
          std::push_heap(heap.begin(), heap.end(), worse);
        }
      }
      continue;
    }
    const double delta = q[node.axis] - node.split;
    const int near = delta < 0.0 ? node.left : node.right;
    const int far = delta < 0.0 ? node.right : node.left;
    if (static_cast<int>(heap.size()) < k || delta * delta <= heap.front().dist_sq)
      stack.push_back(far);
    stack.push_back(near);
  }

  std::sort(heap.begin(), heap.end(), [](const Hit& a, const Hit& b) {
    return a.dist_sq < b.dist_sq || (a.dist_sq == b.dist_sq && a.index < b.index);
  });
  return heap;
}

template <typename Visit>
void KdTree::walk_radius(int node_idx, const Vec3& q, double radius_sq, Visit&& visit) const {
  const Node& node = nodes_[node_idx];
  if (node.axis == -1) {
    for (int i = node.begin; i < node.end; ++i) {
      const int idx = order_[i];
      if (dist_sq(q, points_[idx]) <= radius_sq) visit(idx);
    }
    return;
  }
  const double delta = q[node.axis] - node.split;
  const int near = delta < 0.0 ? node.left : node.right;
  const int far = delta < 0.0 ? node.right : node.left;
  walk_radius(near, q, radius_sq, visit);
  if (delta * delta <= radius_sq) walk_radius(far, q, radius_sq, visit);
}

std::vector<int> KdTree::radius_indices(const Vec3& q, double radius_sq) const {
  std::vector<int> out;
  walk_radius(root_, q, radius_sq, [&](int idx) { out.push_back(idx); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cograsp
