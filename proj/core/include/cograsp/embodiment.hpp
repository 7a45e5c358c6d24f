#pragma once

#include <vector>

#include "cograsp/point_cloud.hpp"
#include "cograsp/rigid_transform.hpp"
#include "cograsp/triangle_mesh.hpp"

namespace cograsp {

// Parallel-jaw gripper dimensions; defaults approximate an 85 mm-stroke
// two-finger device. All meters.
struct GripperParams {
  double max_width = 0.085;
  double finger_length = 0.038;
  double finger_thickness = 0.012;
  double palm_depth = 0.06;
  double sample_spacing = 0.004;
};

void require_valid(const GripperParams& params);

// Grasp frame: translation sits at the fingertip midpoint, rotation columns
// are [b_g | b_g x a_g | a_g] — baseline first, approach last.
struct GraspPose {
  RigidTransform pose;
  double opening_width = 0.0;
};

Vec3 gripper_approach(const GraspPose& grasp);   // third rotation column
Vec3 gripper_baseline(const GraspPose& grasp);   // first rotation column

// Surface cloud (mask = GRIPPER) of palm body plus two fingers whose centers
// sit opening_width apart along b_g; fingers extend along -a_g from the
// fingertip plane. Point count depends only on params.
PointCloud render_gripper(const GripperParams& params, const GraspPose& grasp);

// Simplified human hand: palm slab with a shallow-V inner surface, four
// finger slabs, one angled thumb slab. Canonical frame: palm normal +z,
// fingers +y.
struct HandModel {
  TriangleMesh template_mesh;
  std::vector<int> palm_faces;   // inner palm surface subset
  PointCloud surface_cloud;      // sampled at <= 0.005 m spacing, mask = HAND
};

HandModel make_hand_model(double sample_spacing = 0.005);

inline constexpr const char* kHandModelId = "cograsp-hand-v1";

enum class NormalAveraging { kUnweighted, kAreaWeighted };

// Approach direction: renormalized average of the posed palm-face unit
// normals (optionally area-weighted).
Vec3 hand_approach(const HandModel& model, const RigidTransform& pose,
                   NormalAveraging mode = NormalAveraging::kUnweighted);

struct HandGrasp {
  RigidTransform pose;
  PointCloud cloud;   // posed surface cloud (PC^h)
  Vec3 approach{};    // unit a_h
};

HandGrasp pose_hand(const HandModel& model, const RigidTransform& pose,
                    NormalAveraging mode = NormalAveraging::kUnweighted);

}  // namespace cograsp
