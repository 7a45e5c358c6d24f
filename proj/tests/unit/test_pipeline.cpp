#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "cograsp/cloud_io.hpp"
#include "cograsp/error.hpp"
#include "cograsp/pipeline.hpp"
#include "cograsp/scene.hpp"
#include "support/temp_dir.hpp"

using namespace cograsp;
using cograsp::testsupport::TempDir;

namespace {

ObjectSpec shape_spec(ShapeKind kind, double d0, double d1, double d2, double spacing) {
  ObjectSpec obj;
  obj.kind = kind;
  obj.dims = {d0, d1, d2};
  obj.spacing = spacing;
  return obj;
}

SceneSpec one_object_scene(const ObjectSpec& obj, uint64_t seed) {
  SceneSpec scene;
  scene.objects.push_back(obj);
  scene.rng_seed = seed;
  return scene;
}

// Small graspable fixture: sphere the gripper can actually span.
PipelineConfig small_config(uint64_t seed, int max_candidates, int n_hands) {
  PipelineConfig cfg;
  cfg.gripper.sample_spacing = 0.008;
  cfg.sampler.max_candidates = max_candidates;
  cfg.hands.n = n_hands;
  cfg.hands.azimuth_samples = 12;
  cfg.scene = one_object_scene(shape_spec(ShapeKind::kSphere, 0.03, 0, 0, 0.006), seed);
  return cfg;
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("scene shapes sample on their surfaces") {
  SUBCASE("sphere radii and normals") {
    const auto objs =
        build_scene_objects(one_object_scene(shape_spec(ShapeKind::kSphere, 0.05, 0, 0, 0.005), 0));
    REQUIRE(objs.size() == 1);
    const SceneObject& so = objs[0];
    REQUIRE(so.cloud.size() > 100);
    REQUIRE(so.normals.size() == so.cloud.size());
    for (size_t i = 0; i < so.cloud.size(); ++i) {
      CHECK(std::abs(so.cloud.points[i].norm() - 0.05) < 1e-9);
      CHECK((so.cloud.points[i] - so.normals[i] * 0.05).norm() < 1e-9);
    }
    CHECK(std::all_of(so.cloud.mask.begin(), so.cloud.mask.end(), [](int8_t m) {
      return m == static_cast<int8_t>(PointRole::kObject);
    }));
  }

  SUBCASE("box stays on its six faces") {
    const auto objs = build_scene_objects(
        one_object_scene(shape_spec(ShapeKind::kBox, 0.04, 0.06, 0.08, 0.005), 0));
    const Vec3 half{0.02, 0.03, 0.04};
    for (const Vec3& p : objs[0].cloud.points) {
      CHECK(std::abs(p.x) <= half.x + 1e-12);
      CHECK(std::abs(p.y) <= half.y + 1e-12);
      CHECK(std::abs(p.z) <= half.z + 1e-12);
      const bool on_face = std::abs(std::abs(p.x) - half.x) < 1e-12 ||
                           std::abs(std::abs(p.y) - half.y) < 1e-12 ||
                           std::abs(std::abs(p.z) - half.z) < 1e-12;
      CHECK(on_face);
    }
  }

  SUBCASE("cylinder wall and caps") {
    const auto objs = build_scene_objects(
        one_object_scene(shape_spec(ShapeKind::kCylinder, 0.03, 0.1, 0, 0.005), 0));
    for (const Vec3& p : objs[0].cloud.points) {
      const double rho = std::hypot(p.x, p.y);
      CHECK(rho <= 0.03 + 1e-12);
      CHECK(std::abs(p.z) <= 0.05 + 1e-12);
      const bool on_wall = std::abs(rho - 0.03) < 1e-12;
      const bool on_cap = std::abs(std::abs(p.z) - 0.05) < 1e-12;
      CHECK((on_wall || on_cap));
    }
  }

  SUBCASE("mug handle sticks out past the body wall") {
    const auto objs = build_scene_objects(
        one_object_scene(shape_spec(ShapeKind::kMug, 0.03, 0.1, 0.025, 0.004), 0));
    double max_rho = 0;
    for (const Vec3& p : objs[0].cloud.points) max_rho = std::max(max_rho, std::hypot(p.x, p.y));
    CHECK(max_rho > 0.03 + 0.025);  // body radius + ring radius at least
    // No handle sample may sit buried inside the body.
    size_t buried = 0;
    for (const Vec3& p : objs[0].cloud.points)
      if (std::hypot(p.x, p.y) < 0.03 - 1e-9 && std::abs(p.z) < 0.05 - 1e-9) ++buried;
    CHECK(buried == 0);
  }

  SUBCASE("l-handle bounding box matches its arms") {
    const auto objs = build_scene_objects(
        one_object_scene(shape_spec(ShapeKind::kLHandle, 0.1, 0.08, 0.02, 0.004), 0));
    Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
    for (const Vec3& p : objs[0].cloud.points) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    CHECK(std::abs((hi.x - lo.x) - 0.1) < 1e-9);
    CHECK(std::abs((hi.y - lo.y) - 0.02) < 1e-9);
    CHECK(std::abs((hi.z - lo.z) - 0.08) < 1e-9);
  }
}

TEST_CASE("scene pose is applied to points and normals") {
  ObjectSpec obj = shape_spec(ShapeKind::kSphere, 0.03, 0, 0, 0.006);
  obj.pose.translation = {1.0, 2.0, 3.0};
  obj.pose.rotation = Mat3::from_axis_angle({0, 1, 0}, 0.8);
  const auto objs = build_scene_objects(one_object_scene(obj, 0));
  const Vec3 center{1.0, 2.0, 3.0};
  for (size_t i = 0; i < objs[0].cloud.size(); ++i) {
    const Vec3 radial = objs[0].cloud.points[i] - center;
    CHECK(std::abs(radial.norm() - 0.03) < 1e-9);
    CHECK((radial - objs[0].normals[i] * 0.03).norm() < 1e-9);
  }
}

TEST_CASE("scene sampling is bitwise deterministic") {
  const SceneSpec scene =
      one_object_scene(shape_spec(ShapeKind::kMug, 0.03, 0.1, 0.025, 0.005), 7);
  const auto a = build_scene_objects(scene);
  const auto b = build_scene_objects(scene);
  REQUIRE(a.size() == b.size());
  REQUIRE(a[0].cloud.size() == b[0].cloud.size());
  for (size_t i = 0; i < a[0].cloud.size(); ++i) {
    CHECK(a[0].cloud.points[i] == b[0].cloud.points[i]);
    CHECK(a[0].normals[i] == b[0].normals[i]);
  }
}

TEST_CASE("scene import samples a mesh object") {
  TempDir dir("mesh");
  TriangleMesh cube;
  const double h = 0.03;
  cube.vertices = {{-h, -h, -h}, {h, -h, -h}, {h, h, -h}, {-h, h, -h},
                   {-h, -h, h},  {h, -h, h},  {h, h, h},  {-h, h, h}};
  cube.faces = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {0, 4, 7}, {0, 7, 3}};
  const auto obj_path = dir / "cube.obj";
  write_obj(obj_path, cube);

  ObjectSpec obj;
  obj.kind = ShapeKind::kMesh;
  obj.mesh_path = obj_path.string();
  obj.spacing = 0.005;
  const auto objs = build_scene_objects(one_object_scene(obj, 0));
  REQUIRE(objs[0].cloud.size() > 50);
  for (size_t i = 0; i < objs[0].cloud.size(); ++i) {
    const Vec3& p = objs[0].cloud.points[i];
    CHECK(std::abs(p.x) <= h + 1e-9);
    CHECK(std::abs(p.y) <= h + 1e-9);
    CHECK(std::abs(p.z) <= h + 1e-9);
    CHECK(std::abs(objs[0].normals[i].norm() - 1.0) < 1e-9);
  }

  ObjectSpec missing;
  missing.kind = ShapeKind::kMesh;
  missing.mesh_path = (dir / "absent.obj").string();
  CHECK_THROWS_AS(build_scene_objects(one_object_scene(missing, 0)), IoError);
}

TEST_CASE("scene validation rejects bad specs") {
  CHECK_THROWS_AS(build_scene_objects(SceneSpec{}), ValidationError);
  CHECK_THROWS_AS(
      build_scene_objects(one_object_scene(shape_spec(ShapeKind::kSphere, 0, 0, 0, 0.005), 0)),
      ValidationError);
  CHECK_THROWS_AS(
      build_scene_objects(one_object_scene(shape_spec(ShapeKind::kBox, 0.1, -0.1, 0.1, 0.005), 0)),
      ValidationError);
  CHECK_THROWS_AS(
      build_scene_objects(one_object_scene(shape_spec(ShapeKind::kSphere, 0.03, 0, 0, 0.0), 0)),
      ValidationError);
}

TEST_CASE("run_pipeline produces a coherent labeled run") {
  TempDir dir("pipeline");
  const PipelineConfig cfg = small_config(21, 8, 3);
  const PipelineResult result = run_pipeline(cfg, dir.path());

  REQUIRE(result.objects.size() == 1);
  const ObjectResult& obj = result.objects[0];
  const ObjectReport& rep = result.report.objects[0];
  REQUIRE(rep.m > 0);
  CHECK(rep.m <= 8);
  CHECK(rep.n == 3);
  CHECK(rep.pair_count == static_cast<size_t>(rep.m) * 3);
  CHECK(obj.records.size() == rep.pair_count);
  CHECK(result.report.total_pairs == rep.pair_count);
  CHECK(result.report.cfg_hash == config_hash(cfg));

  size_t positives = 0;
  for (const ScoreRecord& r : obj.records) {
    CHECK((r.label == 0 || r.label == 1));
    if (r.label == 1) ++positives;
  }
  CHECK(rep.positive_count == positives);
  CHECK(positives <= rep.pair_count / 2);  // strict-median labels

  // accepted + rejected partition the robot grasp indices.
  std::vector<int> seen;
  for (const AcceptedGrasp& a : obj.prune.accepted) seen.push_back(a.index);
  seen.insert(seen.end(), obj.prune.rejected.begin(), obj.prune.rejected.end());
  std::sort(seen.begin(), seen.end());
  REQUIRE(seen.size() == static_cast<size_t>(rep.m));
  for (int i = 0; i < rep.m; ++i) CHECK(seen[static_cast<size_t>(i)] == i);
  CHECK(rep.accepted_count == obj.prune.accepted.size());

  // Aggregates are means of per-grasp means, so they stay inside the
  // per-pair score envelope.
  double lo_d = 1e300, hi_d = -1e300;
  for (const ScoreRecord& r : obj.records) {
    lo_d = std::min(lo_d, r.s_d);
    hi_d = std::max(hi_d, r.s_d);
  }
  CHECK(rep.accepted_stats.count + rep.rejected_stats.count == static_cast<size_t>(rep.m));
  for (const ScoreAggregate* agg : {&rep.accepted_stats, &rep.rejected_stats}) {
    if (agg->count == 0) continue;
    CHECK(agg->mean_s_d >= lo_d - 1e-12);
    CHECK(agg->mean_s_d <= hi_d + 1e-12);
    CHECK(agg->std_s_d >= 0.0);
  }

  // Artifacts round-trip.
  const auto obj_dir = dir / "object_0";
  const auto back = read_records_csv(obj_dir / "records.csv");
  REQUIRE(back.size() == obj.records.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].s_d == obj.records[i].s_d);
    CHECK(back[i].label == obj.records[i].label);
  }
  const Json prune_doc = read_json_file(obj_dir / "prune.json");
  CHECK(prune_doc.at("accepted").size() == obj.prune.accepted.size());
  CHECK(prune_doc.at("config_hash").get<std::string>() == result.report.cfg_hash);
  const Json cands = read_json_file(obj_dir / "candidates.json");
  CHECK(cands.at("robot_grasps").size() == static_cast<size_t>(rep.m));
  CHECK(cands.at("hand_grasps").size() == 3);
  CHECK(cands.at("hand_clearances").size() == 3);
  const Json report_doc = read_json_file(dir / "report.json");
  CHECK(report_doc.at("total_pairs").get<size_t>() == rep.pair_count);
  CHECK(report_doc.dump() == report_to_json(result.report).dump());
}

TEST_CASE("run_pipeline single pair labels to zero") {
  // One grasp, one hand: both medians equal the lone scores, and labels are
  // strict, so the single pair cannot be positive.
  const PipelineConfig cfg = small_config(3, 1, 1);
  const PipelineResult result = run_pipeline(cfg);
  const ObjectReport& rep = result.report.objects[0];
  REQUIRE(rep.m == 1);
  REQUIRE(rep.n == 1);
  REQUIRE(rep.pair_count == 1);
  CHECK(rep.positive_count == 0);
  CHECK(result.objects[0].records[0].label == 0);
  CHECK(result.objects[0].prune.accepted.empty());
  CHECK(result.objects[0].prune.rejected == std::vector<int>{0});
}

TEST_CASE("run_pipeline tolerates zero-candidate objects") {
  TempDir dir("empty");
  PipelineConfig cfg = small_config(5, 8, 2);
  // r = 0.05 sphere: minimum antipodal span exceeds the stroke, no grasps.
  cfg.scene.objects[0].dims = {0.05, 0, 0};
  const PipelineResult result = run_pipeline(cfg, dir.path());

  const ObjectReport& rep = result.report.objects[0];
  CHECK(rep.m == 0);
  CHECK(rep.n == 2);  // hands are placed regardless
  CHECK(rep.pair_count == 0);
  CHECK(result.objects[0].records.empty());
  CHECK(result.report.total_pairs == 0);

  // Artifacts still exist and parse as empty.
  CHECK(read_records_csv(dir / "object_0" / "records.csv").empty());
  const Json prune_doc = read_json_file(dir / "object_0" / "prune.json");
  CHECK(prune_doc.at("accepted").empty());
  CHECK(prune_doc.at("rejected").empty());
  const Json cands = read_json_file(dir / "object_0" / "candidates.json");
  CHECK(cands.at("robot_grasps").empty());
  CHECK(cands.at("hand_grasps").size() == 2);
}

TEST_CASE("run_pipeline applies voxel downsampling before sampling") {
  PipelineConfig cfg = small_config(6, 8, 2);
  cfg.options.voxel_size = 0.012;  // coarser than the 0.006 sampling
  const PipelineResult coarse = run_pipeline(cfg);
  CHECK(coarse.report.objects[0].n == 2);
  // Re-running the downsampled config is still deterministic.
  const PipelineResult again = run_pipeline(cfg);
  REQUIRE(again.objects[0].records.size() == coarse.objects[0].records.size());
  for (size_t i = 0; i < coarse.objects[0].records.size(); ++i)
    CHECK(again.objects[0].records[i].s_d == coarse.objects[0].records[i].s_d);
}

TEST_CASE("run_pipeline validation") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(run_pipeline(cfg), ValidationError);
}

TEST_CASE("generate_dataset writes a consistent manifest") {
  TempDir dir("dataset");
  PipelineConfig base = small_config(0, 6, 2);
  base.scene = SceneSpec{};  // scenes come from the explicit list

  std::vector<SceneSpec> scenes;
  scenes.push_back(one_object_scene(shape_spec(ShapeKind::kSphere, 0.03, 0, 0, 0.006), 11));
  scenes.push_back(
      one_object_scene(shape_spec(ShapeKind::kCylinder, 0.025, 0.08, 0, 0.006), 12));

  const Json manifest = generate_dataset(scenes, base, dir.path());
  REQUIRE(manifest.at("scenes").size() == 2);

  size_t sum_pairs = 0, sum_positive = 0;
  for (const Json& scene : manifest.at("scenes")) {
    sum_pairs += scene.at("pair_count").get<size_t>();
    sum_positive += scene.at("positive_count").get<size_t>();
    size_t object_pairs = 0;
    for (const Json& obj : scene.at("objects"))
      object_pairs += obj.at("pair_count").get<size_t>();
    CHECK(object_pairs == scene.at("pair_count").get<size_t>());
  }
  const size_t total = manifest.at("total_pairs").get<size_t>();
  CHECK(total == sum_pairs);
  CHECK(manifest.at("total_positive").get<size_t>() == sum_positive);
  CHECK(manifest.at("total_negative").get<size_t>() == total - sum_positive);
  CHECK(manifest.at("scenes")[0].at("seed").get<uint64_t>() == 11);

  const size_t train = manifest.at("split").at("train_records").get<size_t>();
  const size_t val = manifest.at("split").at("validation_records").get<size_t>();
  CHECK(train + val == total);
  CHECK(train == static_cast<size_t>(std::llround(0.8 * static_cast<double>(total))));

  // Layout: manifest.json at the root, per-scene/per-object artifacts below.
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  CHECK(std::filesystem::exists(dir / "scene_0" / "object_0" / "records.csv"));
  CHECK(std::filesystem::exists(dir / "scene_1" / "object_0" / "prune.json"));
  CHECK(std::filesystem::exists(dir / "scene_1" / "object_0" / "candidates.json"));
}

TEST_CASE("generate_dataset regeneration is byte identical") {
  TempDir dir_a("regen_a");
  TempDir dir_b("regen_b");
  PipelineConfig base = small_config(0, 6, 2);
  base.scene = SceneSpec{};
  std::vector<SceneSpec> scenes = {
      one_object_scene(shape_spec(ShapeKind::kSphere, 0.03, 0, 0, 0.006), 31)};

  generate_dataset(scenes, base, dir_a.path());
  generate_dataset(scenes, base, dir_b.path());

  for (const char* rel : {"manifest.json", "scene_0/object_0/records.csv",
                          "scene_0/object_0/prune.json",
                          "scene_0/object_0/candidates.json"}) {
    CHECK(read_bytes(dir_a.path() / rel) == read_bytes(dir_b.path() / rel));
  }
}

TEST_CASE("generate_dataset validation") {
  TempDir dir("dsbad");
  PipelineConfig base = small_config(0, 4, 2);
  CHECK_THROWS_AS(generate_dataset({}, base, dir.path()), ValidationError);

  std::vector<SceneSpec> scenes = {base.scene};
  PipelineConfig bad_split = base;
  bad_split.options.split = 1.0;
  CHECK_THROWS_AS(generate_dataset(scenes, bad_split, dir.path()), ValidationError);
}

TEST_CASE("ablation tables are monotone with brute-force endpoints") {
  const PipelineConfig cfg = small_config(91, 10, 3);
  const PipelineResult result = run_pipeline(cfg);
  const auto& records = result.objects[0].records;
  REQUIRE(records.size() >= 12);

  const auto grid_d = default_grid(records, SweepAxis::kDistance, 16);
  const auto grid_a = default_grid(records, SweepAxis::kAngle, 16);
  REQUIRE(grid_d.size() == 16);
  const AblationReport report = ablation_report(records, grid_d, grid_a);

  const ObjectThresholds medians = compute_thresholds(records);
  size_t above_a = 0, above_d = 0;
  for (const ScoreRecord& r : records) {
    if (r.s_a > medians.lambda_a) ++above_a;
    if (r.s_d > medians.lambda_d) ++above_d;
  }

  REQUIRE(report.vary_d.size() == 16);
  // Grid ends sit strictly outside the score range: the low end gates on the
  // fixed median angle threshold alone, the high end excludes everything.
  CHECK(report.vary_d.front().second == above_a);
  CHECK(report.vary_d.back().second == 0);
  CHECK(report.vary_a.front().second == above_d);
  CHECK(report.vary_a.back().second == 0);
  for (size_t i = 1; i < report.vary_d.size(); ++i) {
    CHECK(report.vary_d[i].second <= report.vary_d[i - 1].second);
    CHECK(report.vary_a[i].second <= report.vary_a[i - 1].second);
  }

  TempDir dir("ablation");
  const auto csv = dir / "ablation.csv";
  write_ablation_csv(csv, report);
  std::ifstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "axis,threshold,positive_count");
  size_t distance_rows = 0, angle_rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("distance,", 0) == 0) ++distance_rows;
    else if (line.rfind("angle,", 0) == 0) ++angle_rows;
  }
  CHECK(distance_rows == 16);
  CHECK(angle_rows == 16);
}

TEST_CASE("grid helpers") {
  const auto grid = linspace_grid(-1.0, 2.0, 4);
  REQUIRE(grid.size() == 4);
  CHECK(grid.front() == -1.0);
  CHECK(grid.back() == 2.0);
  CHECK(grid[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(linspace_grid(0, 1, 1), ValidationError);
  CHECK_THROWS_AS(default_grid({}, SweepAxis::kDistance, 8), ValidationError);

  std::vector<ScoreRecord> records(3);
  records[0].s_d = 1.0;
  records[1].s_d = 2.0;
  records[2].s_d = 5.0;
  const auto dg = default_grid(records, SweepAxis::kDistance, 8);
  REQUIRE(dg.size() == 8);
  CHECK(dg.front() < 1.0);
  CHECK(dg.back() > 5.0);
}
