#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/rigid_transform.hpp"

namespace cograsp {

enum class ShapeKind { kBox, kCylinder, kSphere, kMug, kLHandle, kMesh };

// dims by kind:
//   box      — extents (x, y, z)
//   cylinder — (radius, height, -)
//   sphere   — (radius, -, -)
//   mug      — (body radius, height, handle ring radius); tube = 0.3 * ring
//   l-handle — (arm A length, arm B length, bar thickness)
//   mesh     — ignored; geometry comes from mesh_path (OBJ)
struct ObjectSpec {
  ShapeKind kind = ShapeKind::kBox;
  std::array<double, 3> dims{0.1, 0.1, 0.1};
  RigidTransform pose = RigidTransform::identity();
  double spacing = 0.005;
  std::string mesh_path;  // kMesh only
};

struct SceneSpec {
  std::vector<ObjectSpec> objects;
  uint64_t rng_seed = 0;
};

struct SceneObject {
  PointCloud cloud;           // mask = OBJECT
  std::vector<Vec3> normals;  // analytic outward normals, aligned with cloud
};

ShapeKind shape_kind_from_name(const std::string& name);
std::string shape_kind_name(ShapeKind kind);

// Deterministic surface sampling of each object at its spacing, posed.
std::vector<SceneObject> build_scene_objects(const SceneSpec& spec);
std::vector<PointCloud> build_scene(const SceneSpec& spec);

}  // namespace cograsp
