#include "cograsp/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <Eigen/Dense>

#include "cograsp/cloud_metrics.hpp"
#include "cograsp/error.hpp"
#include "cograsp/kdtree.hpp"
#include "cograsp/rng.hpp"

namespace cograsp {

void require_valid(const SamplerConfig& cfg) {
  if (!(cfg.friction_half_angle > 0) || !(cfg.friction_half_angle < std::numbers::pi / 2))
    throw ValidationError("sampler: friction_half_angle must be in (0, pi/2)");
  if (cfg.max_candidates < 1) throw ValidationError("sampler: max_candidates must be >= 1");
  if (cfg.approach_samples_per_axis < 1)
    throw ValidationError("sampler: approach_samples_per_axis must be >= 1");
  if (cfg.standoff < 0) throw ValidationError("sampler: standoff must be >= 0");
  if (cfg.max_attempts < 0) throw ValidationError("sampler: max_attempts must be >= 0");
}

double opening_for_span(double span, const GripperParams& gripper) {
  return std::min(gripper.max_width, span + gripper.finger_thickness + 0.004);
}

namespace {

constexpr double kCollisionClearance = 1e-3;

// True when any cloud point sits strictly closer than `threshold` to the
// index; early-exits on the first offender.
bool collides(const PointCloud& cloud, const KdTree& tree, double threshold) {
  const double thr_sq = threshold * threshold;
  for (const Vec3& p : cloud.points) {
    const KdTree::Hit hit = tree.nearest(p, thr_sq);
    if (hit.index >= 0 && hit.dist_sq < thr_sq) return true;
  }
  return false;
}

}  // namespace

std::vector<GraspCandidate> sample_robot_grasps(const PointCloud& object_cloud,
                                                const std::vector<Vec3>& normals,
                                                const GripperParams& gripper,
                                                const SamplerConfig& cfg) {
  require_valid(object_cloud, "sample_robot_grasps object cloud");
  require_valid(gripper);
  require_valid(cfg);
  if (normals.size() != object_cloud.size())
    throw ValidationError("sample_robot_grasps: normals not aligned with cloud");
  for (const Vec3& n : normals)
    if (std::abs(n.norm() - 1.0) > 1e-3)
      throw ValidationError("sample_robot_grasps: normals must be unit length");

  const size_t count = object_cloud.size();
  const KdTree tree(object_cloud);
  Rng rng(cfg.rng_seed);
  const double cos_cone = std::cos(cfg.friction_half_angle);
  const int slots = cfg.approach_samples_per_axis;
  const int budget =
      cfg.max_attempts > 0 ? cfg.max_attempts : 64 * cfg.max_candidates;

  std::vector<GraspCandidate> out;
  std::unordered_set<uint64_t> tried_pairs;

  for (int attempt = 0;
       attempt < budget && static_cast<int>(out.size()) < cfg.max_candidates; ++attempt) {
    const size_t i = rng.index(count);
    const Vec3 p1 = object_cloud.points[i];
    const auto partners = tree.radius_indices(p1, gripper.max_width * gripper.max_width);
    if (partners.size() < 2) continue;
    const size_t j = static_cast<size_t>(partners[rng.index(partners.size())]);
    if (j == i) continue;
    if (!tried_pairs.insert((static_cast<uint64_t>(i) << 32) | j).second) continue;

    const Vec3 p2 = object_cloud.points[j];
    const double span = dist(p1, p2);
    if (span < 1e-6) continue;
    const Vec3 d = (p2 - p1) / span;
    if (dot(d, -normals[i]) < cos_cone) continue;
    if (dot(d, normals[j]) < cos_cone) continue;

    const double phase = rng.uniform();
    const Vec3 u0 = any_orthonormal(d);
    const Vec3 v0 = cross(d, u0);
    const Vec3 mid = (p1 + p2) * 0.5;
    const double opening = opening_for_span(span, gripper);

    for (int k = 0; k < slots && static_cast<int>(out.size()) < cfg.max_candidates; ++k) {
      const double phi = 2.0 * std::numbers::pi * (k + phase) / slots;
      const Vec3 a = u0 * std::cos(phi) + v0 * std::sin(phi);  // approach, a_g ⊥ b_g
      GraspCandidate cand;
      cand.grasp.pose.rotation = Mat3::from_cols(d, cross(a, d), a);
      cand.grasp.pose.translation = mid - a * cfg.standoff;
      cand.grasp.opening_width = opening;
      cand.contact_a = static_cast<int>(i);
      cand.contact_b = static_cast<int>(j);
      cand.slot = k;

      const PointCloud rendered = render_gripper(gripper, cand.grasp);
      if (collides(rendered, tree, kCollisionClearance)) continue;
      out.push_back(cand);
    }
  }

  std::sort(out.begin(), out.end(), [](const GraspCandidate& x, const GraspCandidate& y) {
    if (x.contact_a != y.contact_a) return x.contact_a < y.contact_a;
    if (x.contact_b != y.contact_b) return x.contact_b < y.contact_b;
    return x.slot < y.slot;
  });
  return out;
}

void require_valid(const HandSynthConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("hand synth: n must be >= 1");
  if (!(cfg.radial_offset > 0)) throw ValidationError("hand synth: radial_offset must be > 0");
  if (cfg.azimuth_samples < cfg.n)
    throw ValidationError("hand synth: azimuth_samples must be >= n");
}

namespace {

// Covariance eigenvector most aligned with world z; ties go to the smaller
// eigen index. Returned with non-negative z component.
Vec3 principal_vertical_axis(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : cloud.points) {
    const Eigen::Vector3d v(p.x - c.x, p.y - c.y, p.z - c.z);
    cov += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  int best = 0;
  double best_align = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double align = std::abs(solver.eigenvectors()(2, k));
    if (align > best_align) {
      best_align = align;
      best = k;
    }
  }
  const Eigen::Vector3d e = solver.eigenvectors().col(best);
  Vec3 w{e.x(), e.y(), e.z()};
  if (w.z < 0) w = -w;
  return w.normalized();
}

}  // namespace

std::vector<HandGrasp> synthesize_hand_grasps(const PointCloud& object_cloud,
                                              const HandModel& hand,
                                              const HandSynthConfig& cfg,
                                              std::vector<double>* clearances,
                                              NormalAveraging mode) {
  require_valid(object_cloud, "synthesize_hand_grasps object cloud");
  require_valid(cfg);

  const Vec3 c = centroid(object_cloud);
  const Vec3 w = principal_vertical_axis(object_cloud);
  const Vec3 ex = any_orthonormal(w);
  const Vec3 ey = cross(w, ex);
  const KdTree tree(object_cloud);

  // n distinct azimuth slots, seeded, visited in ascending order.
  Rng rng(cfg.rng_seed);
  std::vector<int> all_slots(static_cast<size_t>(cfg.azimuth_samples));
  for (size_t s = 0; s < all_slots.size(); ++s) all_slots[s] = static_cast<int>(s);
  for (int pick = 0; pick < cfg.n; ++pick) {
    const size_t swap_with = pick + rng.index(all_slots.size() - pick);
    std::swap(all_slots[pick], all_slots[swap_with]);
  }
  std::vector<int> slots(all_slots.begin(), all_slots.begin() + cfg.n);
  std::sort(slots.begin(), slots.end());

  double max_radial = 0.0;
  for (const Vec3& p : object_cloud.points) {
    const Vec3 r = p - c;
    max_radial = std::max(max_radial, (r - w * dot(r, w)).norm());
  }

  std::vector<HandGrasp> out;
  if (clearances) clearances->clear();
  for (int s : slots) {
    const double phi = 2.0 * std::numbers::pi * s / cfg.azimuth_samples;
    const Vec3 u = ex * std::cos(phi) + ey * std::sin(phi);  // outward radial
    // Palm normal (+z of the hand frame) faces back toward the axis; fingers
    // run along the vertical axis.
    const RigidTransform base{Mat3::from_cols(cross(w, -u), w, -u), Vec3{}};

    double t = max_radial + cfg.radial_offset + 0.15;
    double achieved = 0.0;
    for (int iter = 0; iter < 10; ++iter) {
      RigidTransform pose = base;
      pose.translation = c + u * t;
      achieved = min_pair_distance(transform_cloud(hand.surface_cloud, pose), tree);
      const double err = achieved - cfg.radial_offset;
      if (std::abs(err) <= 1e-4) break;
      t -= err;
    }
    RigidTransform pose = base;
    pose.translation = c + u * t;
    out.push_back(pose_hand(hand, pose, mode));
    if (clearances) clearances->push_back(achieved);
  }
  return out;
}

}  // namespace cograsp
