#pragma once

#include <array>
#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp {

// Convex hull as a closed triangle surface with outward CCW faces.
//
// Output is canonical: vertices keep the relative order of the input cloud,
// each face triple starts at its smallest index, and faces are sorted, so
// identical inputs produce identical hulls.
struct ConvexHull {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<Vec3> face_normals;    // unit, outward
  std::vector<double> face_offsets;  // plane: dot(normal, x) = offset

  // Signed distance to the farthest face plane (<= 0 inside).
  double max_plane_distance(const Vec3& p) const;
  bool contains(const Vec3& p, double tol) const { return max_plane_distance(p) <= tol; }

  double volume() const;

  // Vertex maximizing dot(v, dir); ties resolve to the lowest index.
  const Vec3& support(const Vec3& dir) const;
};

// Quickhull. Throws DegenerateInputError for <4 points or (near-)coplanar
// input; callers needing a hull for thin clouds use build_hull_padded.
ConvexHull build_hull(const std::vector<Vec3>& points);
inline ConvexHull build_hull(const PointCloud& cloud) { return build_hull(cloud.points); }

// Hull that is defined for every non-empty cloud: degenerate inputs are
// padded by duplicating the points offset +-1e-6 m along the best-fit plane
// normal (then along further axes for lines and single points).
ConvexHull build_hull_padded(const PointCloud& cloud);

inline constexpr double kHullPadding = 1e-6;

}  // namespace cograsp
