#include "cograsp/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cograsp/cloud_metrics.hpp"
#include "cograsp/convex_hull.hpp"
#include "cograsp/error.hpp"
#include "cograsp/hull_contact.hpp"
#include "cograsp/kdtree.hpp"
#include "cograsp/parallel.hpp"

namespace cograsp {

double score_s_d(const PointCloud& gripper_cloud, const PointCloud& hand_cloud,
                 int threads) {
  return mean_pair_distance(gripper_cloud, hand_cloud, threads);
}

double score_s_a(const Vec3& a_g, const Vec3& a_h) {
  if (std::abs(a_g.norm() - 1.0) > 1e-6 || std::abs(a_h.norm() - 1.0) > 1e-6)
    throw ValidationError("score_s_a: approach vectors must be unit length");
  return -dot(a_g, a_h);
}

std::pair<double, bool> score_s_n(const PointCloud& gripper_cloud,
                                  const PointCloud& hand_cloud) {
  const ConvexHull hg = build_hull_padded(gripper_cloud);
  const ConvexHull hh = build_hull_padded(hand_cloud);
  if (hulls_intersect(hg, hh)) return {0.0, true};
  return {min_pair_distance(gripper_cloud, hand_cloud), false};
}

std::vector<ScoreRecord> score_all_pairs(const std::vector<RobotGrasp>& robot,
                                         const std::vector<HandGrasp>& hand,
                                         int threads) {
  if (robot.empty() || hand.empty())
    throw ValidationError("score_all_pairs: both grasp lists must be non-empty");

  const int64_t m = static_cast<int64_t>(robot.size());
  const int64_t n = static_cast<int64_t>(hand.size());

  // Shared per-grasp geometry, built up front.
  std::vector<ConvexHull> robot_hulls(robot.size());
  std::vector<Vec3> robot_approach(robot.size());
  parallel_for(m, threads, [&](int64_t i) {
    robot_hulls[i] = build_hull_padded(robot[i].cloud);
    robot_approach[i] = gripper_approach(robot[i].grasp);
  });
  std::vector<ConvexHull> hand_hulls(hand.size());
  std::vector<KdTree> hand_trees;
  hand_trees.reserve(hand.size());
  for (const HandGrasp& h : hand) hand_trees.emplace_back(h.cloud);
  parallel_for(n, threads, [&](int64_t j) {
    hand_hulls[j] = build_hull_padded(hand[j].cloud);
  });

  std::vector<ScoreRecord> records(static_cast<size_t>(m * n));
  parallel_for(m * n, threads, [&](int64_t idx) {
    const int64_t i = idx / n;
    const int64_t j = idx % n;
    try {
      ScoreRecord& r = records[idx];
      r.robot_index = static_cast<int>(i);
      r.hand_index = static_cast<int>(j);
      r.s_d = mean_pair_distance(robot[i].cloud, hand[j].cloud);
      r.s_a = score_s_a(robot_approach[i], hand[j].approach);
      if (hulls_intersect(robot_hulls[i], hand_hulls[j])) {
        r.s_n = 0.0;
        r.hulls_overlap = true;
      } else {
        r.s_n = min_pair_distance(robot[i].cloud, hand_trees[j]);
        r.hulls_overlap = false;
      }
    } catch (const ValidationError& e) {
      throw ValidationError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            "): " + e.what());
    } catch (const Error& e) {
      throw Error("pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " +
                  e.what());
    }
  });
  return records;
}

namespace {

double median(std::vector<double> values, bool lower) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return lower ? values[n / 2 - 1] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ObjectThresholds compute_thresholds(const std::vector<ScoreRecord>& records,
                                    bool lower_median) {
  if (records.empty()) throw ValidationError("compute_thresholds: empty record list");
  std::vector<double> sd, sa;
  sd.reserve(records.size());
  sa.reserve(records.size());
  for (const ScoreRecord& r : records) {
    sd.push_back(r.s_d);
    sa.push_back(r.s_a);
  }
  return {median(std::move(sd), lower_median), median(std::move(sa), lower_median)};
}

int label_pair(const ScoreRecord& record, const ObjectThresholds& th) {
  return record.s_d > th.lambda_d && record.s_a > th.lambda_a ? 1 : 0;
}

void label_all(std::vector<ScoreRecord>& records, const ObjectThresholds& th) {
  for (ScoreRecord& r : records) r.label = static_cast<int8_t>(label_pair(r, th));
}

PruneResult prune(const std::vector<ScoreRecord>& records, int m, int n,
                  double min_fraction) {
  if (m < 1 || n < 1) throw ValidationError("prune: m and n must be >= 1");
  if (records.size() != static_cast<size_t>(m) * static_cast<size_t>(n))
    throw ValidationError("prune: expected exactly m*n records");

  std::vector<int> positives(static_cast<size_t>(m), 0);
  std::vector<double> sa_norm_sum(static_cast<size_t>(m), 0.0);
  std::vector<int8_t> seen(static_cast<size_t>(m) * static_cast<size_t>(n), 0);
  for (const ScoreRecord& r : records) {
    if (r.robot_index < 0 || r.robot_index >= m || r.hand_index < 0 || r.hand_index >= n)
      throw ValidationError("prune: record indices out of range");
    int8_t& cell = seen[static_cast<size_t>(r.robot_index) * n + r.hand_index];
    if (cell) throw ValidationError("prune: duplicate pair record");
    cell = 1;
    if (r.label != 0 && r.label != 1)
      throw ValidationError("prune: records must be labeled before pruning");
    if (r.label == 1) {
      ++positives[r.robot_index];
      sa_norm_sum[r.robot_index] += (r.s_a + 1.0) / 2.0;
    }
  }
  // Every cell marked once and none twice means full m x n coverage.

  PruneResult result;
  result.fractions.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double fraction = static_cast<double>(positives[i]) / n;
    result.fractions[i] = fraction;
    if (fraction > 0.0 && fraction >= min_fraction) {
      result.accepted.push_back(
          {i, fraction, sa_norm_sum[i] / positives[i]});
    } else {
      result.rejected.push_back(i);
    }
  }
  std::sort(result.accepted.begin(), result.accepted.end(),
            [](const AcceptedGrasp& a, const AcceptedGrasp& b) {
              if (a.fraction != b.fraction) return a.fraction > b.fraction;
              if (a.mean_positive_s_a != b.mean_positive_s_a)
                return a.mean_positive_s_a > b.mean_positive_s_a;
              return a.index < b.index;
            });
  return result;
}

std::vector<std::pair<double, size_t>> sweep_thresholds(
    const std::vector<ScoreRecord>& records, SweepAxis axis,
    const std::vector<double>& grid, bool lower_median) {
  if (records.empty()) throw ValidationError("sweep_thresholds: empty record list");
  if (grid.empty()) throw ValidationError("sweep_thresholds: empty grid");

  const ObjectThresholds th = compute_thresholds(records, lower_median);
  std::vector<std::pair<double, size_t>> out;
  out.reserve(grid.size());
  for (double t : grid) {
    size_t count = 0;
    for (const ScoreRecord& r : records) {
      const bool pass = axis == SweepAxis::kDistance
                            ? (r.s_d > t && r.s_a > th.lambda_a)
                            : (r.s_a > t && r.s_d > th.lambda_d);
      if (pass) ++count;
    }
    out.emplace_back(t, count);
  }
  return out;
}

}  // namespace cograsp
