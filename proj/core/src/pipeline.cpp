#include "cograsp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "cograsp/cloud_metrics.hpp"
#include "cograsp/error.hpp"
#include "cograsp/rng.hpp"
#include "cograsp/text_format.hpp"

namespace cograsp {

namespace {

struct GraspMeans {
  double s_d = 0, s_a = 0, s_n = 0;
};

ScoreAggregate aggregate(const std::vector<GraspMeans>& means, const std::vector<int>& set) {
  ScoreAggregate agg;
  agg.count = set.size();
  if (set.empty()) return agg;
  for (int i : set) {
    agg.mean_s_d += means[i].s_d;
    agg.mean_s_a += means[i].s_a;
    agg.mean_s_n += means[i].s_n;
  }
  const double inv = 1.0 / static_cast<double>(set.size());
  agg.mean_s_d *= inv;
  agg.mean_s_a *= inv;
  agg.mean_s_n *= inv;
  for (int i : set) {
    const double dd = means[i].s_d - agg.mean_s_d;
    const double da = means[i].s_a - agg.mean_s_a;
    const double dn = means[i].s_n - agg.mean_s_n;
    agg.std_s_d += dd * dd;
    agg.std_s_a += da * da;
    agg.std_s_n += dn * dn;
  }
  agg.std_s_d = std::sqrt(agg.std_s_d * inv);
  agg.std_s_a = std::sqrt(agg.std_s_a * inv);
  agg.std_s_n = std::sqrt(agg.std_s_n * inv);
  return agg;
}

Json aggregate_to_json(const ScoreAggregate& a) {
  Json j;
  j["count"] = a.count;
  j["mean_s_d"] = a.mean_s_d;
  j["std_s_d"] = a.std_s_d;
  j["mean_s_a"] = a.mean_s_a;
  j["std_s_a"] = a.std_s_a;
  j["mean_s_n"] = a.mean_s_n;
  j["std_s_n"] = a.std_s_n;
  return j;
}

Json candidates_to_json(const ObjectResult& obj, const std::string& cfg_hash) {
  Json j;
  j["config_hash"] = cfg_hash;
  Json robot = Json::array();
  for (const GraspCandidate& g : obj.candidates) robot.push_back(grasp_to_json(g));
  j["robot_grasps"] = std::move(robot);
  Json hands = Json::array();
  for (const HandGrasp& h : obj.hands) {
    Json e = transform_to_json(h.pose);
    e["model_id"] = kHandModelId;
    hands.push_back(std::move(e));
  }
  j["hand_grasps"] = std::move(hands);
  j["hand_clearances"] = obj.hand_clearances;
  return j;
}

}  // namespace

Json report_to_json(const RunReport& report) {
  Json j;
  j["config_hash"] = report.cfg_hash;
  j["total_pairs"] = report.total_pairs;
  j["total_positive"] = report.total_positive;
  Json objects = Json::array();
  for (const ObjectReport& o : report.objects) {
    Json e;
    e["object_index"] = o.object_index;
    e["m"] = o.m;
    e["n"] = o.n;
    e["pair_count"] = o.pair_count;
    e["positive_count"] = o.positive_count;
    e["accepted_count"] = o.accepted_count;
    e["thresholds"] = thresholds_to_json(o.thresholds);
    e["accepted_stats"] = aggregate_to_json(o.accepted_stats);
    e["rejected_stats"] = aggregate_to_json(o.rejected_stats);
    objects.push_back(std::move(e));
  }
  j["objects"] = std::move(objects);
  return j;
}

PipelineResult run_pipeline(const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir, int threads) {
  if (cfg.scene.objects.empty())
    throw ValidationError("run_pipeline: config has no scene objects");

  const std::string cfg_hash_str = config_hash(cfg);
  const NormalAveraging averaging = cfg.options.area_weighted_normals
                                        ? NormalAveraging::kAreaWeighted
                                        : NormalAveraging::kUnweighted;
  const HandModel hand_model = make_hand_model();

  const bool write = !out_dir.empty();
  if (write) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());
  }

  const std::vector<SceneObject> scene_objects = build_scene_objects(cfg.scene);

  PipelineResult result;
  result.report.cfg_hash = cfg_hash_str;

  for (size_t i = 0; i < scene_objects.size(); ++i) {
    PointCloud cloud = scene_objects[i].cloud;
    std::vector<Vec3> normals = scene_objects[i].normals;
    if (cfg.options.voxel_size > 0) {
      const auto kept = voxel_downsample_indices(cloud, cfg.options.voxel_size);
      PointCloud down;
      std::vector<Vec3> down_normals;
      down.points.reserve(kept.size());
      down_normals.reserve(kept.size());
      for (size_t k : kept) {
        down.points.push_back(cloud.points[k]);
        if (cloud.has_mask()) down.mask.push_back(cloud.mask[k]);
        down_normals.push_back(normals[k]);
      }
      cloud = std::move(down);
      normals = std::move(down_normals);
    }

    const uint64_t object_seed = mix_seed(cfg.scene.rng_seed, i);
    SamplerConfig sampler_cfg = cfg.sampler;
    sampler_cfg.rng_seed = mix_seed(object_seed, kSamplerSeedSalt);
    HandSynthConfig hands_cfg = cfg.hands;
    hands_cfg.rng_seed = mix_seed(object_seed, kHandSeedSalt);

    ObjectResult obj;
    obj.candidates = sample_robot_grasps(cloud, normals, cfg.gripper, sampler_cfg);
    obj.hands = synthesize_hand_grasps(cloud, hand_model, hands_cfg,
                                       &obj.hand_clearances, averaging);

    ObjectReport rep;
    rep.object_index = static_cast<int>(i);
    rep.m = static_cast<int>(obj.candidates.size());
    rep.n = static_cast<int>(obj.hands.size());

    if (!obj.candidates.empty()) {
      std::vector<RobotGrasp> robot;
      robot.reserve(obj.candidates.size());
      for (const GraspCandidate& c : obj.candidates)
        robot.push_back({c.grasp, render_gripper(cfg.gripper, c.grasp)});

      obj.records = score_all_pairs(robot, obj.hands, threads);
      obj.thresholds = compute_thresholds(obj.records, cfg.options.lower_median);
      label_all(obj.records, obj.thresholds);
      obj.prune = prune(obj.records, rep.m, rep.n, cfg.options.min_fraction);

      rep.pair_count = obj.records.size();
      for (const ScoreRecord& r : obj.records)
        if (r.label == 1) ++rep.positive_count;
      rep.accepted_count = obj.prune.accepted.size();
      rep.thresholds = obj.thresholds;

      std::vector<GraspMeans> means(robot.size());
      for (const ScoreRecord& r : obj.records) {
        means[r.robot_index].s_d += r.s_d / rep.n;
        means[r.robot_index].s_a += r.s_a / rep.n;
        means[r.robot_index].s_n += r.s_n / rep.n;
      }
      std::vector<int> accepted_set;
      for (const AcceptedGrasp& a : obj.prune.accepted) accepted_set.push_back(a.index);
      std::sort(accepted_set.begin(), accepted_set.end());
      rep.accepted_stats = aggregate(means, accepted_set);
      rep.rejected_stats = aggregate(means, obj.prune.rejected);
    }

    if (write) {
      const std::filesystem::path obj_dir =
          out_dir / ("object_" + std::to_string(i));
      std::error_code ec;
      std::filesystem::create_directories(obj_dir, ec);
      if (ec) throw IoError("cannot create output directory: " + obj_dir.string());
      write_records_csv(obj_dir / "records.csv", obj.records);
      write_json_file(obj_dir / "prune.json",
                      prune_to_json(obj.prune, obj.thresholds,
                                    cfg.options.min_fraction, cfg_hash_str));
      write_json_file(obj_dir / "candidates.json", candidates_to_json(obj, cfg_hash_str));
    }

    result.report.total_pairs += rep.pair_count;
    result.report.total_positive += rep.positive_count;
    result.report.objects.push_back(rep);
    result.objects.push_back(std::move(obj));
  }

  if (write) write_json_file(out_dir / "report.json", report_to_json(result.report));
  return result;
}

Json generate_dataset(const std::vector<SceneSpec>& scenes, const PipelineConfig& base,
                      const std::filesystem::path& out_dir, int threads) {
  if (scenes.empty()) throw ValidationError("generate_dataset: needs at least one scene");
  if (!(base.options.split > 0) || !(base.options.split < 1))
    throw ValidationError("generate_dataset: split must be in (0, 1)");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir.string());

  // Dataset identity: the shared config plus every scene spec.
  PipelineConfig hash_cfg = base;
  hash_cfg.scene = SceneSpec{};
  Json hash_doc;
  hash_doc["config"] = config_to_json(hash_cfg);
  {
    Json arr = Json::array();
    for (const SceneSpec& s : scenes) {
      PipelineConfig c = base;
      c.scene = s;
      arr.push_back(config_to_json(c).at("scene"));
    }
    hash_doc["scenes"] = std::move(arr);
  }
  char hash_buf[17];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(hash_doc.dump())));
  const std::string dataset_hash = hash_buf;

  Json manifest;
  manifest["config_hash"] = dataset_hash;
  Json scenes_json = Json::array();
  size_t total_pairs = 0;
  size_t total_positive = 0;

  for (size_t k = 0; k < scenes.size(); ++k) {
    PipelineConfig cfg = base;
    cfg.scene = scenes[k];
    const PipelineResult res =
        run_pipeline(cfg, out_dir / ("scene_" + std::to_string(k)), threads);

    Json scene_entry;
    scene_entry["scene_index"] = k;
    scene_entry["seed"] = scenes[k].rng_seed;
    Json objs = Json::array();
    for (const ObjectReport& o : res.report.objects) {
      Json e;
      e["object_index"] = o.object_index;
      e["m"] = o.m;
      e["n"] = o.n;
      e["pair_count"] = o.pair_count;
      e["positive_count"] = o.positive_count;
      e["accepted_count"] = o.accepted_count;
      objs.push_back(std::move(e));
    }
    scene_entry["objects"] = std::move(objs);
    scene_entry["pair_count"] = res.report.total_pairs;
    scene_entry["positive_count"] = res.report.total_positive;
    scenes_json.push_back(std::move(scene_entry));

    total_pairs += res.report.total_pairs;
    total_positive += res.report.total_positive;
  }

  manifest["scenes"] = std::move(scenes_json);
  manifest["total_pairs"] = total_pairs;
  manifest["total_positive"] = total_positive;
  manifest["total_negative"] = total_pairs - total_positive;

  // Record-level split over the global order (scene, object, robot-major):
  // the first `train` records train, the rest validate.
  const auto train =
      static_cast<size_t>(std::llround(base.options.split * static_cast<double>(total_pairs)));
  Json split;
  split["fraction"] = base.options.split;
  split["train_records"] = train;
  split["validation_records"] = total_pairs - train;
  manifest["split"] = std::move(split);

  write_json_file(out_dir / "manifest.json", manifest);
  return manifest;
}

AblationReport ablation_report(const std::vector<ScoreRecord>& records,
                               const std::vector<double>& grid_d,
                               const std::vector<double>& grid_a, bool lower_median) {
  AblationReport report;
  report.vary_d = sweep_thresholds(records, SweepAxis::kDistance, grid_d, lower_median);
  report.vary_a = sweep_thresholds(records, SweepAxis::kAngle, grid_a, lower_median);
  return report;
}

void write_ablation_csv(const std::filesystem::path& path, const AblationReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "axis,threshold,positive_count\n";
  for (const auto& [t, c] : report.vary_d)
    out << "distance," << format_real(t, 9) << ',' << c << '\n';
  for (const auto& [t, c] : report.vary_a)
    out << "angle," << format_real(t, 9) << ',' << c << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> linspace_grid(double lo, double hi, int steps) {
  if (steps < 2) throw ValidationError("grid needs at least 2 steps");
  std::vector<double> grid(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k)
    grid[static_cast<size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
  return grid;
}

std::vector<double> default_grid(const std::vector<ScoreRecord>& records, SweepAxis axis,
                                 int steps) {
  if (records.empty()) throw ValidationError("default_grid: empty record list");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const ScoreRecord& r : records) {
    const double v = axis == SweepAxis::kDistance ? r.s_d : r.s_a;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double eps = std::max(1e-9, 1e-6 * (hi - lo));
  return linspace_grid(lo - eps, hi + eps, steps);
}

}  // namespace cograsp
