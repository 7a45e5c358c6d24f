#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp {

// Balanced kd-tree over a point cloud (median split on the widest axis).
//
// Queries are exact: candidate distances use the shared dist_sq() expression
// and ties resolve to the lowest original index, so results are bit-identical
// to a brute-force scan in index order.
class KdTree {
 public:
  struct Hit {
    int index = -1;
    double dist_sq = std::numeric_limits<double>::infinity();
  };

  explicit KdTree(const std::vector<Vec3>& points);
  explicit KdTree(const PointCloud& cloud) : KdTree(cloud.points) {}

  size_t size() const { return points_.size(); }

  // Nearest neighbor of q. `bound_sq` is an optional exclusive upper bound:
  // pairs at squared distance > bound_sq may be skipped, so a miss returns
  // index -1. Pass infinity (the default) for an unconditional query.
  Hit nearest(const Vec3& q,
              double bound_sq = std::numeric_limits<double>::infinity()) const;

  // The k nearest neighbors ordered by (dist_sq, index) ascending.
  std::vector<Hit> knn(const Vec3& q, int k) const;

  // All indices with dist_sq(q, p) <= radius_sq, ascending by index.
  std::vector<int> radius_indices(const Vec3& q, double radius_sq) const;

 private:
  struct Node {
    // Leaf when axis == -1; then [begin, end) indexes order_.
    int axis = -1;
    double split = 0.0;
    int left = -1;
    int right = -1;
    int begin = 0;
    int end = 0;
  };

  static constexpr int kLeafSize = 16;

  int build(int begin, int end);

  void nearest_rec(int node, const Vec3& q, Hit& best) const;

  template <typename Visit>
  void walk_radius(int node, const Vec3& q, double radius_sq, Visit&& visit) const;

  std::vector<Vec3> points_;  // original order
  std::vector<int> order_;    // permutation referenced by leaves
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace cograsp
