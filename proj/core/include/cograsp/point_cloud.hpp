#pragma once

#include <cstdint>
#include <vector>

#include "cograsp/error.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp {

// Per-point role tag carried on combined clouds.
enum class PointRole : int8_t {
  kGripper = -1,
  kObject = 0,
  kHand = 1,
};

struct PointCloud {
  std::vector<Vec3> points;
  // Empty means no mask; otherwise one role per point.
  std::vector<int8_t> mask;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}
  PointCloud(std::vector<Vec3> pts, PointRole role)
      : points(std::move(pts)), mask(points.size(), static_cast<int8_t>(role)) {}

  size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_mask() const { return !mask.empty(); }
};

inline void require_valid(const PointCloud& c, const char* what) {
  if (c.empty()) throw ValidationError(std::string(what) + ": empty point cloud");
  if (c.has_mask() && c.mask.size() != c.points.size())
    throw ValidationError(std::string(what) + ": mask length does not match point count");
  for (const Vec3& p : c.points)
    if (!p.finite()) throw ValidationError(std::string(what) + ": non-finite coordinate");
}

inline Vec3 centroid(const PointCloud& c) {
  Vec3 s{};
  for (const Vec3& p : c.points) s += p;
  return s / static_cast<double>(c.points.size());
}

inline Vec3 centroid(const std::vector<Vec3>& pts) {
  Vec3 s{};
  for (const Vec3& p : pts) s += p;
  return s / static_cast<double>(pts.size());
}

}  // namespace cograsp
