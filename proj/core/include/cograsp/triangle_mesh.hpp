#pragma once

#include <array>
#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp {

// Indexed triangle mesh with counter-clockwise winding (outward normals).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

inline constexpr double kMinFaceArea = 1e-12;  // m^2

// Non-unit normal; magnitude is twice the face area.
Vec3 face_normal_raw(const TriangleMesh& mesh, int face);
Vec3 face_unit_normal(const TriangleMesh& mesh, int face);
double face_area(const TriangleMesh& mesh, int face);

// Indices in range and every face non-degenerate (area > kMinFaceArea).
void require_valid(const TriangleMesh& mesh, const char* what);

// Deterministic surface sampling: a barycentric lattice per face with step
// chosen so neighboring samples are at most `spacing` apart. Shared vertices
// are emitted once per face; callers that care can voxel-downsample.
PointCloud sample_surface(const TriangleMesh& mesh, double spacing,
                          PointRole role = PointRole::kObject);

}  // namespace cograsp
