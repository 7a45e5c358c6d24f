#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cograsp/candidates.hpp"
#include "cograsp/scene.hpp"
#include "cograsp/scoring.hpp"

namespace cograsp {

// Insertion-ordered so artifact files have a stable, readable layout.
using Json = nlohmann::ordered_json;

struct PipelineOptions {
  double voxel_size = 0.0;  // 0 = scoring uses clouds as sampled
  double min_fraction = 0.0;
  bool lower_median = false;
  bool area_weighted_normals = false;
  double split = 0.8;
  int normals_k = 16;  // estimate_normals neighborhood for imported clouds
};

struct PipelineConfig {
  GripperParams gripper;
  SamplerConfig sampler;
  HandSynthConfig hands;
  PipelineOptions options;
  SceneSpec scene;
};

// Full round trip; absent keys take defaults, unknown keys are rejected.
Json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const Json& j);
PipelineConfig load_config(const std::filesystem::path& path);

uint64_t fnv1a64(std::string_view data);
// FNV-1a of the canonical config dump, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

Json transform_to_json(const RigidTransform& xf);  // rotation 9 row-major + translation
RigidTransform transform_from_json(const Json& j);

Json scene_to_json(const SceneSpec& s);
SceneSpec scene_from_json(const Json& j);

Json grasp_to_json(const GraspCandidate& cand);
GraspCandidate grasp_from_json(const Json& j);
void write_grasps_json(const std::filesystem::path& path,
                       const std::vector<GraspCandidate>& grasps);
std::vector<GraspCandidate> read_grasps_json(const std::filesystem::path& path);

// Hand grasps travel as pose + model id; clouds are re-rendered on import.
struct HandPoseRecord {
  RigidTransform pose;
  std::string model_id = kHandModelId;
};
void write_hands_json(const std::filesystem::path& path,
                      const std::vector<HandGrasp>& hands);
std::vector<HandPoseRecord> read_hands_json(const std::filesystem::path& path);

// records.csv: header robot_index,hand_index,s_d,s_a,s_n,overlap,label with
// 17-significant-digit reals (this artifact feeds tests, not plots).
void write_records_csv(const std::filesystem::path& path,
                       const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> read_records_csv(const std::filesystem::path& path);

Json records_to_json(const std::vector<ScoreRecord>& records);
std::vector<ScoreRecord> records_from_json(const Json& j);

Json thresholds_to_json(const ObjectThresholds& th);
ObjectThresholds thresholds_from_json(const Json& j);

Json prune_to_json(const PruneResult& result, const ObjectThresholds& th,
                   double min_fraction, const std::string& cfg_hash);

// Plot CSV (9 significant digits): axis,threshold,positive_count.
void write_sweep_csv(const std::filesystem::path& path, const std::string& axis,
                     const std::vector<std::pair<double, size_t>>& table);

void write_json_file(const std::filesystem::path& path, const Json& j);
Json read_json_file(const std::filesystem::path& path);

}  // namespace cograsp
