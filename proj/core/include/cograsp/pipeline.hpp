#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cograsp/serialize.hpp"

namespace cograsp {

// Stage salts for deriving sampler/hand seeds from a scene or object seed.
inline constexpr uint64_t kSamplerSeedSalt = 0xa5;
inline constexpr uint64_t kHandSeedSalt = 0xb7;

struct ScoreAggregate {
  size_t count = 0;
  double mean_s_d = 0, std_s_d = 0;  // population std
  double mean_s_a = 0, std_s_a = 0;
  double mean_s_n = 0, std_s_n = 0;
};

struct ObjectReport {
  int object_index = 0;
  int m = 0;  // sampled robot grasps
  int n = 0;  // hand grasps
  size_t pair_count = 0;
  size_t positive_count = 0;
  size_t accepted_count = 0;
  ObjectThresholds thresholds;
  // Per grasp, each score is averaged over its n pairings; stats below are
  // over those per-grasp means, split by prune outcome.
  ScoreAggregate accepted_stats;
  ScoreAggregate rejected_stats;
};

struct RunReport {
  std::vector<ObjectReport> objects;
  size_t total_pairs = 0;
  size_t total_positive = 0;
  std::string cfg_hash;
};

struct ObjectResult {
  std::vector<GraspCandidate> candidates;
  std::vector<HandGrasp> hands;
  std::vector<double> hand_clearances;
  std::vector<ScoreRecord> records;  // labeled
  ObjectThresholds thresholds;
  PruneResult prune;
};

struct PipelineResult {
  RunReport report;
  std::vector<ObjectResult> objects;
};

// Per-object pipeline over cfg.scene: sample, synthesize, score, threshold,
// label, prune. With a non-empty out_dir, writes
// object_<i>/{records.csv, prune.json, candidates.json} plus report.json.
// Objects yielding zero candidates produce empty (non-fatal) results.
PipelineResult run_pipeline(const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir = {},
                            int threads = 1);

// Multi-scene dataset: out_dir/scene_<k>/object_<i>/... plus manifest.json
// (counts, seeds, config hash, 80/20-style split bookkeeping; no
// timestamps). Returns the manifest.
Json generate_dataset(const std::vector<SceneSpec>& scenes, const PipelineConfig& base,
                      const std::filesystem::path& out_dir, int threads = 1);

struct AblationReport {
  std::vector<std::pair<double, size_t>> vary_d;  // lambda_a fixed at median
  std::vector<std::pair<double, size_t>> vary_a;  // lambda_d fixed at median
};

AblationReport ablation_report(const std::vector<ScoreRecord>& records,
                               const std::vector<double>& grid_d,
                               const std::vector<double>& grid_a,
                               bool lower_median = false);
void write_ablation_csv(const std::filesystem::path& path, const AblationReport& report);

std::vector<double> linspace_grid(double lo, double hi, int steps);
// steps values spanning [min - eps, max + eps] of the axis score.
std::vector<double> default_grid(const std::vector<ScoreRecord>& records, SweepAxis axis,
                                 int steps);

Json report_to_json(const RunReport& report);

}  // namespace cograsp
