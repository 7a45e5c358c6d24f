#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cograsp/embodiment.hpp"
#include "cograsp/point_cloud.hpp"

namespace cograsp {

// One robot/hand grasp pairing. label stays -1 until thresholds are applied.
struct ScoreRecord {
  int robot_index = 0;
  int hand_index = 0;
  double s_d = 0.0;   // mean pairwise distance, meters
  double s_a = 0.0;   // -(a_g . a_h)
  double s_n = 0.0;   // 0 on hull overlap, else min cross-pair distance
  bool hulls_overlap = false;
  int8_t label = -1;
};

struct ObjectThresholds {
  double lambda_d = 0.0;
  double lambda_a = 0.0;
};

struct AcceptedGrasp {
  int index = 0;
  double fraction = 0.0;            // compatible hand grasps / n
  double mean_positive_s_a = 0.0;   // tie-break: mean (s_a+1)/2 over positive pairs
};

struct PruneResult {
  std::vector<AcceptedGrasp> accepted;  // rank order
  std::vector<int> rejected;            // ascending
  std::vector<double> fractions;        // per robot grasp, index order
};

// S_d: mean pairwise Euclidean distance between the clouds.
double score_s_d(const PointCloud& gripper_cloud, const PointCloud& hand_cloud,
                 int threads = 1);

// S_a: negated inner product of unit approach vectors.
double score_s_a(const Vec3& a_g, const Vec3& a_h);

// S_n: (0, true) when the padded convex hulls intersect, otherwise
// (min cross-pair distance, false).
std::pair<double, bool> score_s_n(const PointCloud& gripper_cloud,
                                  const PointCloud& hand_cloud);

struct RobotGrasp {
  GraspPose grasp;
  PointCloud cloud;  // rendered gripper, PC^g
};

// All m x n pairings in robot-major order; hulls and hand kd-trees are built
// once per grasp and shared. Labels are left unset.
std::vector<ScoreRecord> score_all_pairs(const std::vector<RobotGrasp>& robot,
                                         const std::vector<HandGrasp>& hand,
                                         int threads = 1);

// Median of the s_d and s_a lists. Even-length median defaults to the mean
// of the two central order statistics; lower_median picks the lower one.
ObjectThresholds compute_thresholds(const std::vector<ScoreRecord>& records,
                                    bool lower_median = false);

// 1 iff strictly above BOTH thresholds.
int label_pair(const ScoreRecord& record, const ObjectThresholds& th);
void label_all(std::vector<ScoreRecord>& records, const ObjectThresholds& th);

// Compatibility fraction per robot grasp; accepted iff fraction > 0 and
// fraction >= min_fraction, ranked by fraction desc, then mean normalized
// s_a over positive pairs desc, then index asc. Records must cover all
// m x n pairs and be labeled.
PruneResult prune(const std::vector<ScoreRecord>& records, int m, int n,
                  double min_fraction = 0.0);

enum class SweepAxis { kDistance, kAngle };

// Positive-pair counts over a threshold grid for one axis, the other held at
// its median.
std::vector<std::pair<double, size_t>> sweep_thresholds(
    const std::vector<ScoreRecord>& records, SweepAxis axis,
    const std::vector<double>& grid, bool lower_median = false);

}  // namespace cograsp
