#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "cograsp/cloud_io.hpp"
#include "cograsp/pipeline.hpp"
#include "cograsp/scene.hpp"
#include "support/temp_dir.hpp"

using namespace cograsp;
using cograsp::testsupport::TempDir;

namespace {

// Binary path injected by the build; every test drives the real executable.
const std::string kCli = COGRASP_CLI_PATH;

int run_cli(const std::string& args, const std::string& env_prefix = "",
            const std::string& stderr_path = "/dev/null") {
  std::string cmd;
  if (!env_prefix.empty()) cmd += "env " + env_prefix + " ";
  cmd += kCli + " " + args + " >/dev/null 2>" + stderr_path;
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Shared scratch fixture: object cloud, a small config, and the artifact
// chain produced once by the CLI itself.
struct CliFixture {
  TempDir dir{"cli"};
  std::string object_ply;
  std::string config;

  CliFixture() {
    SceneSpec scene;
    ObjectSpec obj;
    obj.kind = ShapeKind::kSphere;
    obj.dims = {0.03, 0, 0};
    obj.spacing = 0.006;
    scene.objects.push_back(obj);
    scene.rng_seed = 5;

    const auto objects = build_scene_objects(scene);
    object_ply = (dir / "sphere.ply").string();
    write_ply(object_ply, objects[0].cloud);

    PipelineConfig cfg;
    cfg.gripper.sample_spacing = 0.008;
    cfg.sampler.max_candidates = 6;
    cfg.sampler.rng_seed = 17;
    cfg.hands.n = 3;
    cfg.hands.azimuth_samples = 12;
    cfg.hands.rng_seed = 18;
    cfg.scene = scene;
    config = (dir / "config.json").string();
    write_json_file(config, config_to_json(cfg));
  }

  std::string arg(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli help and argument errors") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("sample --help") == 0);
  CHECK(run_cli("") == 1);                    // a subcommand is required
  CHECK(run_cli("frobnicate") == 1);          // unknown subcommand
  CHECK(run_cli("sample --bogus-flag x") == 1);
  CHECK(run_cli("sample") == 1);              // missing required options
  CHECK(run_cli("run --config /nonexistent.json --out /tmp/x") == 1);
}

TEST_CASE("cli artifact chain") {
  CliFixture fx;
  const std::string common = " --config " + fx.config;

  // sample -> candidates
  REQUIRE(run_cli("sample --object " + fx.object_ply + " --out " + fx.arg("cands.json") +
                  common) == 0);
  const auto grasps = read_grasps_json(fx.arg("cands.json"));
  REQUIRE(!grasps.empty());
  REQUIRE(grasps.size() <= 6);
  const int m = static_cast<int>(grasps.size());

  // hands -> poses
  REQUIRE(run_cli("hands --object " + fx.object_ply + " --out " + fx.arg("hands.json") +
                  common) == 0);
  REQUIRE(read_hands_json(fx.arg("hands.json")).size() == 3);

  // score -> m x n records
  REQUIRE(run_cli("score --robot " + fx.arg("cands.json") + " --hands " +
                  fx.arg("hands.json") + " --object " + fx.object_ply + " --out " +
                  fx.arg("records.csv") + common) == 0);
  const auto records = read_records_csv(fx.arg("records.csv"));
  REQUIRE(records.size() == static_cast<size_t>(m) * 3);
  for (const ScoreRecord& r : records) CHECK(r.label == -1);

  // thresholds -> medians file
  REQUIRE(run_cli("thresholds --records " + fx.arg("records.csv") + " --out " +
                  fx.arg("th.json") + common) == 0);
  const ObjectThresholds th = thresholds_from_json(read_json_file(fx.arg("th.json")));
  const ObjectThresholds expected = compute_thresholds(records);
  CHECK(th.lambda_d == expected.lambda_d);
  CHECK(th.lambda_a == expected.lambda_a);

  // label: explicit thresholds and recomputed thresholds agree byte-for-byte
  REQUIRE(run_cli("label --records " + fx.arg("records.csv") + " --thresholds " +
                  fx.arg("th.json") + " --out " + fx.arg("labeled.csv") + common) == 0);
  REQUIRE(run_cli("label --records " + fx.arg("records.csv") + " --out " +
                  fx.arg("labeled_auto.csv") + common) == 0);
  CHECK(read_bytes(fx.arg("labeled.csv")) == read_bytes(fx.arg("labeled_auto.csv")));
  for (const ScoreRecord& r : read_records_csv(fx.arg("labeled.csv")))
    CHECK((r.label == 0 || r.label == 1));

  // prune: labeled and unlabeled inputs give identical artifacts
  REQUIRE(run_cli("prune --records " + fx.arg("labeled.csv") + " --m " +
                  std::to_string(m) + " --n 3 --out " + fx.arg("prune.json") + common) == 0);
  REQUIRE(run_cli("prune --records " + fx.arg("records.csv") + " --m " +
                  std::to_string(m) + " --n 3 --out " + fx.arg("prune_auto.json") +
                  common) == 0);
  CHECK(read_bytes(fx.arg("prune.json")) == read_bytes(fx.arg("prune_auto.json")));
  const Json prune_doc = read_json_file(fx.arg("prune.json"));
  CHECK(prune_doc.at("accepted").size() + prune_doc.at("rejected").size() ==
        static_cast<size_t>(m));

  // sweep: default grid, explicit grid, and the dual-axis table
  REQUIRE(run_cli("sweep --records " + fx.arg("labeled.csv") +
                  " --axis distance --grid-steps 20 --out " + fx.arg("sweep.csv") +
                  common) == 0);
  {
    std::ifstream in(fx.arg("sweep.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "axis,threshold,positive_count");
    size_t rows = 0;
    size_t prev = records.size() + 1;
    while (std::getline(in, line)) {
      ++rows;
      const size_t count = std::stoul(line.substr(line.rfind(',') + 1));
      CHECK(count <= prev);
      prev = count;
    }
    CHECK(rows == 20);
  }
  REQUIRE(run_cli("sweep --records " + fx.arg("labeled.csv") +
                  " --axis angle --grid-min -1 --grid-max 1 --grid-steps 5 --out " +
                  fx.arg("sweep_grid.csv") + common) == 0);
  {
    std::ifstream in(fx.arg("sweep_grid.csv"));
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line.rfind("angle,-1,", 0) == 0);
  }
  REQUIRE(run_cli("sweep --records " + fx.arg("labeled.csv") +
                  " --axis both --grid-steps 7 --out " + fx.arg("ablation.csv") +
                  common) == 0);
  {
    std::ifstream in(fx.arg("ablation.csv"));
    std::string line;
    std::getline(in, line);
    size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 14);
  }
  // --grid-min without --grid-max violates the pairing constraint.
  CHECK(run_cli("sweep --records " + fx.arg("labeled.csv") +
                " --axis angle --grid-min -1 --out " + fx.arg("x.csv") + common) == 1);

  // export: records re-encodings and the masked overlay cloud
  REQUIRE(run_cli("export --format json --records " + fx.arg("labeled.csv") + " --out " +
                  fx.arg("labeled.json") + common) == 0);
  REQUIRE(run_cli("export --format csv --records " + fx.arg("labeled.json") + " --out " +
                  fx.arg("labeled_back.csv") + common) == 0);
  CHECK(read_bytes(fx.arg("labeled_back.csv")) == read_bytes(fx.arg("labeled.csv")));

  REQUIRE(run_cli("export --format ply-overlay --object " + fx.object_ply + " --robot " +
                  fx.arg("cands.json") + " --hands " + fx.arg("hands.json") +
                  " --robot-index 0 --hand-index 1 --out " + fx.arg("overlay.ply") +
                  common) == 0);
  const PointCloud overlay = read_ply(fx.arg("overlay.ply"));
  REQUIRE(overlay.has_mask());
  size_t gripper_pts = 0, object_pts = 0, hand_pts = 0;
  for (int8_t v : overlay.mask) {
    if (v == static_cast<int8_t>(PointRole::kGripper)) ++gripper_pts;
    else if (v == static_cast<int8_t>(PointRole::kObject)) ++object_pts;
    else if (v == static_cast<int8_t>(PointRole::kHand)) ++hand_pts;
  }
  CHECK(gripper_pts > 0);
  CHECK(hand_pts > 0);
  CHECK(object_pts == read_ply(fx.object_ply).size());
  CHECK(gripper_pts + object_pts + hand_pts == overlay.size());

  CHECK(run_cli("export --format ply-overlay --object " + fx.object_ply + " --robot " +
                fx.arg("cands.json") + " --hands " + fx.arg("hands.json") +
                " --robot-index 99 --out " + fx.arg("bad.ply") + common) == 1);
  CHECK(run_cli("export --format ply-overlay --out " + fx.arg("bad.ply") + common) == 1);
  CHECK(run_cli("export --format hologram --records " + fx.arg("labeled.csv") +
                " --out " + fx.arg("bad.out") + common) == 1);
  CHECK(run_cli("export --format csv --out " + fx.arg("bad.csv") + common) == 1);
}

TEST_CASE("cli exit codes distinguish validation from io") {
  CliFixture fx;
  // Unsupported cloud extension: validation error, exit 1.
  const auto xyz = fx.arg("cloud.xyz");
  std::ofstream(xyz) << "0 0 0\n";
  CHECK(run_cli("sample --object " + xyz + " --out " + fx.arg("c.json")) == 1);

  // Unwritable output: io error, exit 2.
  CHECK(run_cli("sample --object " + fx.object_ply + " --out " +
                fx.arg("no_such_dir") + "/c.json --config " + fx.config) == 2);

  // Malformed records file: validation error, exit 1.
  const auto bad = fx.arg("bad.csv");
  std::ofstream(bad) << "not,a,records,file\n";
  CHECK(run_cli("thresholds --records " + bad + " --out " + fx.arg("th.json")) == 1);
}

TEST_CASE("cli seed precedence and determinism") {
  CliFixture fx;
  const std::string base = "sample --object " + fx.object_ply + " --config " + fx.config;

  REQUIRE(run_cli(base + " --seed 123 --out " + fx.arg("a.json")) == 0);
  REQUIRE(run_cli(base + " --seed 123 --out " + fx.arg("b.json")) == 0);
  CHECK(read_bytes(fx.arg("a.json")) == read_bytes(fx.arg("b.json")));

  // COGRASP_SEED matches the equivalent --seed run; the flag wins over env.
  REQUIRE(run_cli(base + " --out " + fx.arg("env.json"), "COGRASP_SEED=123") == 0);
  CHECK(read_bytes(fx.arg("env.json")) == read_bytes(fx.arg("a.json")));
  REQUIRE(run_cli(base + " --seed 123 --out " + fx.arg("flag.json"),
                  "COGRASP_SEED=999") == 0);
  CHECK(read_bytes(fx.arg("flag.json")) == read_bytes(fx.arg("a.json")));

  REQUIRE(run_cli(base + " --seed 124 --out " + fx.arg("other.json")) == 0);
  CHECK(read_bytes(fx.arg("other.json")) != read_bytes(fx.arg("a.json")));

  CHECK(run_cli(base + " --out " + fx.arg("bad.json"), "COGRASP_SEED=pumpkin") == 1);
}

TEST_CASE("cli run and datagen are rerun stable") {
  CliFixture fx;

  REQUIRE(run_cli("run --config " + fx.config + " --out " + fx.arg("run_a")) == 0);
  REQUIRE(run_cli("run --config " + fx.config + " --out " + fx.arg("run_b")) == 0);
  for (const char* rel : {"/object_0/records.csv", "/object_0/prune.json",
                          "/object_0/candidates.json", "/report.json"}) {
    CHECK(read_bytes(fx.arg("run_a") + rel) == read_bytes(fx.arg("run_b") + rel));
  }

  // Scenes list from a file; the manifest and artifacts regenerate bytewise.
  SceneSpec scene2;
  ObjectSpec obj;
  obj.kind = ShapeKind::kCylinder;
  obj.dims = {0.025, 0.08, 0};
  obj.spacing = 0.006;
  scene2.objects.push_back(obj);
  scene2.rng_seed = 8;
  Json scenes = Json::array();
  scenes.push_back(read_json_file(fx.config).at("scene"));
  scenes.push_back(scene_to_json(scene2));
  write_json_file(fx.arg("scenes.json"), scenes);

  REQUIRE(run_cli("datagen --config " + fx.config + " --scenes " + fx.arg("scenes.json") +
                  " --out " + fx.arg("ds_a")) == 0);
  REQUIRE(run_cli("datagen --config " + fx.config + " --scenes " + fx.arg("scenes.json") +
                  " --out " + fx.arg("ds_b")) == 0);
  CHECK(read_bytes(fx.arg("ds_a") + "/manifest.json") ==
        read_bytes(fx.arg("ds_b") + "/manifest.json"));
  CHECK(read_bytes(fx.arg("ds_a") + "/scene_1/object_0/records.csv") ==
        read_bytes(fx.arg("ds_b") + "/scene_1/object_0/records.csv"));
  const Json manifest = read_json_file(fx.arg("ds_a") + "/manifest.json");
  CHECK(manifest.at("scenes").size() == 2);

  // Verbose mode narrates the effective config on stderr.
  REQUIRE(run_cli("run --config " + fx.config + " --out " + fx.arg("run_v") +
                  " --verbose", "", fx.arg("verbose.log")) == 0);
  const std::string log = read_bytes(fx.arg("verbose.log"));
  CHECK(log.find("effective config:") != std::string::npos);
  CHECK(log.find("\"sampler\"") != std::string::npos);
}
