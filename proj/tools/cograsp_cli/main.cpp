#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cograsp/cloud_io.hpp"
#include "cograsp/cloud_metrics.hpp"
#include "cograsp/pipeline.hpp"
#include "cograsp/rng.hpp"

namespace fs = std::filesystem;
using namespace cograsp;

namespace {

struct CommonArgs {
  std::string config_path;
  uint64_t seed = 0;
  bool has_seed = false;
  int threads = 0;  // 0 = auto
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "global seed override")
      ->each([&args](const std::string&) { args.has_seed = true; });
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)")
      ->check(CLI::Range(0, 1024));
  cmd->add_flag("--verbose", args.verbose, "dump effective config to stderr");
}

uint64_t parse_env_seed(const char* text) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (errno != 0 || end == text || *end != '\0')
    throw ValidationError(std::string("COGRASP_SEED: not an unsigned integer: ") + text);
  return v;
}

// Config precedence: built-in defaults < --config file < seed override
// (--seed flag, else COGRASP_SEED). A global seed S reseeds the scene and
// derives stage seeds so every stage changes together.
PipelineConfig effective_config(const CommonArgs& args) {
  PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = load_config(args.config_path);
  bool has_seed = args.has_seed;
  uint64_t seed = args.seed;
  if (!has_seed) {
    if (const char* env = std::getenv("COGRASP_SEED")) {
      seed = parse_env_seed(env);
      has_seed = true;
    }
  }
  if (has_seed) {
    cfg.scene.rng_seed = seed;
    cfg.sampler.rng_seed = mix_seed(seed, kSamplerSeedSalt);
    cfg.hands.rng_seed = mix_seed(seed, kHandSeedSalt);
  }
  if (args.verbose)
    std::cerr << "effective config:\n" << config_to_json(cfg).dump(2) << "\n";
  return cfg;
}

int resolve_threads(const CommonArgs& args) {
  if (args.threads > 0) return args.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

PointCloud load_cloud(const fs::path& path, double obj_spacing) {
  const std::string ext = lower_extension(path);
  if (ext == ".ply") return read_ply(path);
  if (ext == ".csv") return read_csv_cloud(path);
  if (ext == ".obj") return sample_surface(read_obj(path), obj_spacing);
  throw ValidationError("unsupported cloud format (want .ply/.csv/.obj): " +
                        path.string());
}

std::vector<ScoreRecord> load_records(const fs::path& path) {
  if (lower_extension(path) == ".csv") return read_records_csv(path);
  return records_from_json(read_json_file(path));
}

void store_records(const fs::path& path, const std::vector<ScoreRecord>& records) {
  if (lower_extension(path) == ".csv")
    write_records_csv(path, records);
  else
    write_json_file(path, records_to_json(records));
}

NormalAveraging averaging_mode(const PipelineConfig& cfg) {
  return cfg.options.area_weighted_normals ? NormalAveraging::kAreaWeighted
                                           : NormalAveraging::kUnweighted;
}

std::vector<HandGrasp> rebuild_hands(const fs::path& path, const HandModel& model,
                                     NormalAveraging mode) {
  std::vector<HandGrasp> hands;
  for (const HandPoseRecord& rec : read_hands_json(path)) {
    if (rec.model_id != kHandModelId)
      throw ValidationError("unknown hand model id: " + rec.model_id);
    hands.push_back(pose_hand(model, rec.pose, mode));
  }
  return hands;
}

void run_sample(const CommonArgs& args, const std::string& object_path,
                const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  const PointCloud cloud = load_cloud(object_path, 0.005);
  const std::vector<Vec3> normals = estimate_normals(cloud, cfg.options.normals_k);
  const auto grasps = sample_robot_grasps(cloud, normals, cfg.gripper, cfg.sampler);
  write_grasps_json(out_path, grasps);
  if (args.verbose) std::cerr << "sampled " << grasps.size() << " grasps\n";
}

void run_hands(const CommonArgs& args, const std::string& object_path,
               const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  const PointCloud cloud = load_cloud(object_path, 0.005);
  const HandModel model = make_hand_model();
  const auto hands =
      synthesize_hand_grasps(cloud, model, cfg.hands, nullptr, averaging_mode(cfg));
  write_hands_json(out_path, hands);
  if (args.verbose) std::cerr << "synthesized " << hands.size() << " hand grasps\n";
}

void run_score(const CommonArgs& args, const std::string& robot_path,
               const std::string& hands_path, const std::string& object_path,
               const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  // The object cloud does not enter the pair scores; it is validated so a
  // stale path fails loudly instead of silently scoring the wrong scene.
  require_valid(load_cloud(object_path, 0.005), "object cloud");

  const HandModel model = make_hand_model();
  std::vector<RobotGrasp> robot;
  for (const GraspCandidate& cand : read_grasps_json(robot_path))
    robot.push_back({cand.grasp, render_gripper(cfg.gripper, cand.grasp)});
  const std::vector<HandGrasp> hands =
      rebuild_hands(hands_path, model, averaging_mode(cfg));

  const auto records = score_all_pairs(robot, hands, resolve_threads(args));
  store_records(out_path, records);
  if (args.verbose)
    std::cerr << "scored " << records.size() << " pairs (" << robot.size() << " x "
              << hands.size() << ")\n";
}

void run_thresholds(const CommonArgs& args, const std::string& records_path,
                    const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  const auto records = load_records(records_path);
  const ObjectThresholds th = compute_thresholds(records, cfg.options.lower_median);
  write_json_file(out_path, thresholds_to_json(th));
}

void run_label(const CommonArgs& args, const std::string& records_path,
               const std::string& thresholds_path, const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  auto records = load_records(records_path);
  const ObjectThresholds th =
      thresholds_path.empty()
          ? compute_thresholds(records, cfg.options.lower_median)
          : thresholds_from_json(read_json_file(thresholds_path));
  label_all(records, th);
  store_records(out_path, records);
}

void run_prune(const CommonArgs& args, const std::string& records_path, int m, int n,
               const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  auto records = load_records(records_path);
  const bool unlabeled = std::any_of(records.begin(), records.end(),
                                     [](const ScoreRecord& r) { return r.label < 0; });
  ObjectThresholds th = compute_thresholds(records, cfg.options.lower_median);
  if (unlabeled) label_all(records, th);
  const PruneResult result = prune(records, m, n, cfg.options.min_fraction);
  write_json_file(out_path,
                  prune_to_json(result, th, cfg.options.min_fraction, config_hash(cfg)));
  if (args.verbose)
    std::cerr << "accepted " << result.accepted.size() << " of " << m << " grasps\n";
}

void run_sweep(const CommonArgs& args, const std::string& records_path,
               const std::string& axis, int steps, double grid_min, double grid_max,
               bool has_bounds, const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  const auto records = load_records(records_path);
  if (axis == "both") {
    const AblationReport report = ablation_report(
        records, default_grid(records, SweepAxis::kDistance, steps),
        default_grid(records, SweepAxis::kAngle, steps), cfg.options.lower_median);
    write_ablation_csv(out_path, report);
    return;
  }
  const SweepAxis sweep_axis =
      axis == "distance" ? SweepAxis::kDistance : SweepAxis::kAngle;
  const std::vector<double> grid = has_bounds
                                       ? linspace_grid(grid_min, grid_max, steps)
                                       : default_grid(records, sweep_axis, steps);
  write_sweep_csv(out_path, axis,
                  sweep_thresholds(records, sweep_axis, grid, cfg.options.lower_median));
}

void run_run(const CommonArgs& args, const std::string& out_dir) {
  const PipelineConfig cfg = effective_config(args);
  const PipelineResult result = run_pipeline(cfg, out_dir, resolve_threads(args));
  if (args.verbose)
    std::cerr << "pipeline: " << result.report.total_pairs << " pairs, "
              << result.report.total_positive << " positive\n";
}

void run_datagen(const CommonArgs& args, const std::string& scenes_path,
                 const std::string& out_dir) {
  const PipelineConfig cfg = effective_config(args);
  std::vector<SceneSpec> scenes;
  if (scenes_path.empty()) {
    scenes.push_back(cfg.scene);
  } else {
    const Json doc = read_json_file(scenes_path);
    if (!doc.is_array())
      throw ValidationError(scenes_path + ": expected a JSON array of scenes");
    for (const Json& s : doc) scenes.push_back(scene_from_json(s));
  }
  const Json manifest = generate_dataset(scenes, cfg, out_dir, resolve_threads(args));
  if (args.verbose)
    std::cerr << "dataset: " << manifest.at("total_pairs") << " pairs over "
              << scenes.size() << " scenes\n";
}

void run_export(const CommonArgs& args, const std::string& format,
                const std::string& records_path, const std::string& object_path,
                const std::string& robot_path, const std::string& hands_path,
                int robot_index, int hand_index, const std::string& out_path) {
  const PipelineConfig cfg = effective_config(args);
  if (format == "csv" || format == "json") {
    if (records_path.empty())
      throw ValidationError("export " + format + " requires --records");
    const auto records = load_records(records_path);
    if (format == "csv")
      write_records_csv(out_path, records);
    else
      write_json_file(out_path, records_to_json(records));
    return;
  }
  // ply-overlay: object + one gripper + one hand cloud, role-masked.
  if (object_path.empty() || robot_path.empty() || hands_path.empty())
    throw ValidationError("export ply-overlay requires --object, --robot, --hands");
  PointCloud object = load_cloud(object_path, 0.005);
  if (!object.has_mask())
    object.mask.assign(object.size(), static_cast<int8_t>(PointRole::kObject));

  const auto grasps = read_grasps_json(robot_path);
  if (robot_index < 0 || static_cast<size_t>(robot_index) >= grasps.size())
    throw ValidationError("--robot-index out of range");
  const HandModel model = make_hand_model();
  const auto hands = rebuild_hands(hands_path, model, averaging_mode(cfg));
  if (hand_index < 0 || static_cast<size_t>(hand_index) >= hands.size())
    throw ValidationError("--hand-index out of range");

  const PointCloud gripper =
      render_gripper(cfg.gripper, grasps[static_cast<size_t>(robot_index)].grasp);
  const PointCloud& hand = hands[static_cast<size_t>(hand_index)].cloud;

  PointCloud combined;
  combined.points.reserve(gripper.size() + object.size() + hand.size());
  combined.mask.reserve(gripper.size() + object.size() + hand.size());
  auto append = [&combined](const PointCloud& part, PointRole role) {
    for (size_t i = 0; i < part.size(); ++i) {
      combined.points.push_back(part.points[i]);
      combined.mask.push_back(part.has_mask() ? part.mask[i]
                                              : static_cast<int8_t>(role));
    }
  };
  append(gripper, PointRole::kGripper);
  append(object, PointRole::kObject);
  append(hand, PointRole::kHand);
  write_ply(out_path, combined);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cograsp: geometric co-grasp compatibility toolkit"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* sample = app.add_subcommand("sample", "sample antipodal robot grasps");
  std::string sample_object, sample_out;
  sample->add_option("--object", sample_object, "object cloud (.ply/.csv/.obj)")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--out", sample_out, "output candidates JSON")->required();
  add_common(sample, common);

  auto* hands = app.add_subcommand("hands", "synthesize human hand grasps");
  std::string hands_object, hands_out;
  hands->add_option("--object", hands_object, "object cloud (.ply/.csv/.obj)")
      ->required()
      ->check(CLI::ExistingFile);
  hands->add_option("--out", hands_out, "output hand poses JSON")->required();
  add_common(hands, common);

  auto* score = app.add_subcommand("score", "score all robot x hand pairs");
  std::string score_robot, score_hands, score_object, score_out;
  score->add_option("--robot", score_robot, "robot candidates JSON")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--hands", score_hands, "hand poses JSON")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--object", score_object, "object cloud (validated)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--out", score_out, "output records (.csv or .json)")->required();
  add_common(score, common);

  auto* thresholds = app.add_subcommand("thresholds", "compute median thresholds");
  std::string th_records, th_out;
  thresholds->add_option("--records", th_records, "score records (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  thresholds->add_option("--out", th_out, "output thresholds JSON")->required();
  add_common(thresholds, common);

  auto* label = app.add_subcommand("label", "apply thresholds to records");
  std::string label_records, label_thresholds, label_out;
  label->add_option("--records", label_records, "score records (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  label->add_option("--thresholds", label_thresholds,
                    "thresholds JSON (default: compute from records)")
      ->check(CLI::ExistingFile);
  label->add_option("--out", label_out, "output records (.csv or .json)")->required();
  add_common(label, common);

  auto* prune_cmd = app.add_subcommand("prune", "prune and rank robot grasps");
  std::string prune_records, prune_out;
  int prune_m = 0, prune_n = 0;
  prune_cmd->add_option("--records", prune_records, "score records (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  prune_cmd->add_option("--m", prune_m, "robot grasp count")->required();
  prune_cmd->add_option("--n", prune_n, "hand grasp count")->required();
  prune_cmd->add_option("--out", prune_out, "output prune JSON")->required();
  add_common(prune_cmd, common);

  auto* sweep = app.add_subcommand("sweep", "threshold ablation sweep");
  std::string sweep_records, sweep_axis = "distance", sweep_out;
  int sweep_steps = 20;
  double sweep_min = 0, sweep_max = 0;
  sweep->add_option("--records", sweep_records, "score records (.csv or .json)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--axis", sweep_axis, "swept threshold axis")
      ->check(CLI::IsMember({"distance", "angle", "both"}))
      ->required();
  sweep->add_option("--grid-steps", sweep_steps, "grid size (default 20)")
      ->check(CLI::Range(2, 100000));
  auto* opt_min = sweep->add_option("--grid-min", sweep_min, "grid lower bound");
  auto* opt_max = sweep->add_option("--grid-max", sweep_max, "grid upper bound");
  opt_min->needs(opt_max);
  opt_max->needs(opt_min);
  sweep->add_option("--out", sweep_out, "output sweep CSV")->required();
  add_common(sweep, common);

  auto* run = app.add_subcommand("run", "full per-scene pipeline");
  std::string run_out;
  run->add_option("--out", run_out, "output directory")->required();
  add_common(run, common);

  auto* datagen = app.add_subcommand("datagen", "multi-scene dataset generation");
  std::string datagen_scenes, datagen_out;
  datagen->add_option("--scenes", datagen_scenes,
                      "JSON array of scene specs (default: config scene)")
      ->check(CLI::ExistingFile);
  datagen->add_option("--out", datagen_out, "output directory")->required();
  add_common(datagen, common);

  auto* export_cmd = app.add_subcommand("export", "re-export artifacts");
  std::string export_format, export_records, export_object, export_robot,
      export_hands, export_out;
  int export_robot_index = 0, export_hand_index = 0;
  export_cmd->add_option("--format", export_format, "output format")
      ->check(CLI::IsMember({"csv", "json", "ply-overlay"}))
      ->required();
  export_cmd->add_option("--records", export_records, "score records (.csv or .json)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--object", export_object, "object cloud (ply-overlay)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--robot", export_robot, "robot candidates JSON (ply-overlay)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--hands", export_hands, "hand poses JSON (ply-overlay)")
      ->check(CLI::ExistingFile);
  export_cmd->add_option("--robot-index", export_robot_index, "grasp index (default 0)");
  export_cmd->add_option("--hand-index", export_hand_index, "hand index (default 0)");
  export_cmd->add_option("--out", export_out, "output path")->required();
  add_common(export_cmd, common);

  sample->callback([&] { run_sample(common, sample_object, sample_out); });
  hands->callback([&] { run_hands(common, hands_object, hands_out); });
  score->callback(
      [&] { run_score(common, score_robot, score_hands, score_object, score_out); });
  thresholds->callback([&] { run_thresholds(common, th_records, th_out); });
  label->callback(
      [&] { run_label(common, label_records, label_thresholds, label_out); });
  prune_cmd->callback(
      [&] { run_prune(common, prune_records, prune_m, prune_n, prune_out); });
  sweep->callback([&] {
    run_sweep(common, sweep_records, sweep_axis, sweep_steps, sweep_min, sweep_max,
              opt_min->count() > 0, sweep_out);
  });
  run->callback([&] { run_run(common, run_out); });
  datagen->callback([&] { run_datagen(common, datagen_scenes, datagen_out); });
  export_cmd->callback([&] {
    run_export(common, export_format, export_records, export_object, export_robot,
               export_hands, export_robot_index, export_hand_index, export_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
