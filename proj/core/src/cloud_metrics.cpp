#include "cograsp/cloud_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include <Eigen/Dense>

#include "cograsp/error.hpp"
#include "cograsp/parallel.hpp"

namespace cograsp {

double min_pair_distance(const PointCloud& a, const PointCloud& b) {
  require_valid(a, "min_pair_distance");
  require_valid(b, "min_pair_distance");
  // Index the larger cloud, scan the smaller one.
  const PointCloud& scan = a.size() <= b.size() ? a : b;
  const PointCloud& indexed = a.size() <= b.size() ? b : a;
  const KdTree tree(indexed);
  return min_pair_distance(scan, tree);
}

double min_pair_distance(const PointCloud& a, const KdTree& b_index) {
  require_valid(a, "min_pair_distance");
  double best_sq = std::numeric_limits<double>::infinity();
  for (const Vec3& p : a.points) {
    const KdTree::Hit hit = b_index.nearest(p, best_sq);
    if (hit.index >= 0) best_sq = hit.dist_sq;
  }
  return std::sqrt(best_sq);
}

namespace {

// Sum over b of |p - b_j| in index order; single accumulator.
double row_distance_sum(const Vec3& p, const std::vector<Vec3>& pts) {
  double s = 0.0;
  for (const Vec3& q : pts) s += std::sqrt(dist_sq(p, q));
  return s;
}

}  // namespace

double mean_pair_distance(const PointCloud& a, const PointCloud& b, int threads) {
  require_valid(a, "mean_pair_distance");
  require_valid(b, "mean_pair_distance");
  const int64_t rows = static_cast<int64_t>(a.size());
  std::vector<double> partial(static_cast<size_t>(rows));
  parallel_for(rows, threads,
               [&](int64_t i) { partial[i] = row_distance_sum(a.points[i], b.points); });
  double total = 0.0;
  for (double s : partial) total += s;
  return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

std::vector<Vec3> estimate_normals(const PointCloud& cloud, int k) {
  require_valid(cloud, "estimate_normals");
  if (k < 3) throw ValidationError("estimate_normals: k must be at least 3");
  if (static_cast<size_t>(k) > cloud.size())
    throw ValidationError("estimate_normals: k exceeds cloud size");

  const KdTree tree(cloud);
  const Vec3 center = centroid(cloud);
  std::vector<Vec3> normals(cloud.size());

  for (size_t i = 0; i < cloud.size(); ++i) {
    const auto hits = tree.knn(cloud.points[i], k);
    Vec3 mean{};
    for (const auto& h : hits) mean += cloud.points[h.index];
    mean = mean / static_cast<double>(hits.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& h : hits) {
      const Vec3 d = cloud.points[h.index] - mean;
      const Eigen::Vector3d v(d.x, d.y, d.z);
      cov += v * v.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Eigen::Vector3d n = solver.eigenvectors().col(0);  // smallest eigenvalue
    Vec3 normal{n.x(), n.y(), n.z()};
    normal = normal.normalized();
    if (dot(normal, cloud.points[i] - center) < 0.0) normal = -normal;
    normals[i] = normal;
  }
  return normals;
}

std::vector<size_t> voxel_downsample_indices(const PointCloud& cloud, double voxel_size) {
  require_valid(cloud, "voxel_downsample");
  if (!(voxel_size > 0.0)) throw ValidationError("voxel_downsample: voxel size must be positive");

  auto key_of = [&](const Vec3& p) {
    const int64_t kx = static_cast<int64_t>(std::floor(p.x / voxel_size));
    const int64_t ky = static_cast<int64_t>(std::floor(p.y / voxel_size));
    const int64_t kz = static_cast<int64_t>(std::floor(p.z / voxel_size));
    // 21 bits per axis is plenty at desk scale.
    return (static_cast<uint64_t>(kx & 0x1fffff) << 42) |
           (static_cast<uint64_t>(ky & 0x1fffff) << 21) |
           static_cast<uint64_t>(kz & 0x1fffff);
  };

  std::unordered_map<uint64_t, bool> seen;
  seen.reserve(cloud.size());
  std::vector<size_t> kept;
  for (size_t i = 0; i < cloud.size(); ++i)
    if (seen.emplace(key_of(cloud.points[i]), true).second) kept.push_back(i);
  return kept;
}

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
  PointCloud out;
  for (size_t i : voxel_downsample_indices(cloud, voxel_size)) {
    out.points.push_back(cloud.points[i]);
    if (cloud.has_mask()) out.mask.push_back(cloud.mask[i]);
  }
  return out;
}

}  // namespace cograsp
