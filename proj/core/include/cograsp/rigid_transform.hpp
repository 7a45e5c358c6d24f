#pragma once

#include "cograsp/error.hpp"
#include "cograsp/point_cloud.hpp"
#include "cograsp/vec3.hpp"

namespace cograsp {

inline constexpr double kRotationTol = 1e-6;

// Rigid pose: p -> rotation * p + translation. Meters throughout.
struct RigidTransform {
  Mat3 rotation = Mat3::identity();
  Vec3 translation{};

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  RigidTransform compose(const RigidTransform& inner) const {
    // (*this) o inner: first apply inner, then this.
    return {rotation * inner.rotation, rotation * inner.translation + translation};
  }

  RigidTransform inverse() const {
    const Mat3 rt = rotation.transposed();
    return {rt, -(rt * translation)};
  }

  bool valid(double tol = kRotationTol) const {
    return translation.finite() && is_rotation(rotation, tol);
  }
};

inline void require_valid(const RigidTransform& xf, const char* what) {
  if (!xf.valid())
    throw ValidationError(std::string(what) + ": rotation is not orthonormal with det +1");
}

// Applies a rigid motion to every point; mask and order are preserved.
inline PointCloud transform_cloud(const PointCloud& cloud, const RigidTransform& xf) {
  require_valid(xf, "transform_cloud");
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(xf.apply(p));
  out.mask = cloud.mask;
  return out;
}

}  // namespace cograsp
