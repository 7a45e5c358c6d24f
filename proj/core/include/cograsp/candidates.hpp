#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cograsp/embodiment.hpp"
#include "cograsp/point_cloud.hpp"

namespace cograsp {

struct SamplerConfig {
  double friction_half_angle = std::atan(0.5);
  int max_candidates = 200;
  int approach_samples_per_axis = 8;
  double standoff = 0.01;
  uint64_t rng_seed = 0;
  int max_attempts = 0;  // 0 = 64 * max_candidates
};

void require_valid(const SamplerConfig& cfg);

// A sampled grasp plus the contact metadata needed to re-check the antipodal
// constraint after the fact.
struct GraspCandidate {
  GraspPose grasp;
  int contact_a = -1;  // object cloud indices
  int contact_b = -1;
  int slot = 0;        // approach-direction slot around the baseline
};

// Antipodal two-contact sampling over an object cloud with per-point outward
// normals. Contacts (p1, p2) satisfy span <= max_width and the friction-cone
// condition: d = (p2-p1)/|..| within friction_half_angle of -n1 and of +n2.
// b_g = d; a_g is drawn from approach_samples_per_axis directions around the
// baseline (random phase per contact pair); poses whose rendered gripper
// comes within 1e-3 m of the object are discarded. T = contact midpoint -
// standoff * a_g. Returns at most max_candidates grasps, sorted by
// (contact_a, contact_b, slot). Deterministic given rng_seed.
std::vector<GraspCandidate> sample_robot_grasps(const PointCloud& object_cloud,
                                                const std::vector<Vec3>& normals,
                                                const GripperParams& gripper,
                                                const SamplerConfig& cfg);

// Opening rule shared by sampler and re-checks: span plus finger stock plus
// 2 mm clearance per side, capped at the stroke.
double opening_for_span(double span, const GripperParams& gripper);

struct HandSynthConfig {
  int n = 4;
  double radial_offset = 0.02;
  int azimuth_samples = 16;
  uint64_t rng_seed = 0;
};

void require_valid(const HandSynthConfig& cfg);

// Places n hands on an azimuth ring around the object's principal vertical
// axis, palm facing the centroid, slid radially until the hand surface sits
// radial_offset from the nearest object point. Collisions are reported via
// `clearances` (achieved min distance per hand), never prevented.
std::vector<HandGrasp> synthesize_hand_grasps(const PointCloud& object_cloud,
                                              const HandModel& hand,
                                              const HandSynthConfig& cfg,
                                              std::vector<double>* clearances = nullptr,
                                              NormalAveraging mode = NormalAveraging::kUnweighted);

}  // namespace cograsp
