#include "cograsp/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cograsp/error.hpp"
#include "cograsp/text_format.hpp"

namespace cograsp {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ValidationError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

double get_real(const Json& j, const char* key, double fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string(where) + "." + key + ": expected a number");
  return v.get<double>();
}

int64_t get_int(const Json& j, const char* key, int64_t fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ValidationError(std::string(where) + "." + key + ": expected an integer");
  return v.get<int64_t>();
}

bool get_bool(const Json& j, const char* key, bool fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError(std::string(where) + "." + key + ": expected a bool");
  return v.get<bool>();
}

std::vector<double> get_reals(const Json& j, size_t count, const char* where) {
  if (!j.is_array() || j.size() != count)
    throw ValidationError(std::string(where) + ": expected an array of " +
                          std::to_string(count) + " numbers");
  std::vector<double> out;
  out.reserve(count);
  for (const Json& v : j) {
    if (!v.is_number()) throw ValidationError(std::string(where) + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json transform_to_json(const RigidTransform& xf) {
  Json j;
  j["rotation"] = xf.rotation.m;  // row-major
  j["translation"] = {xf.translation.x, xf.translation.y, xf.translation.z};
  return j;
}

RigidTransform transform_from_json(const Json& j) {
  check_keys(j, {"rotation", "translation"}, "transform");
  if (!j.contains("rotation") || !j.contains("translation"))
    throw ValidationError("transform: rotation and translation are required");
  const auto r = get_reals(j.at("rotation"), 9, "transform.rotation");
  const auto t = get_reals(j.at("translation"), 3, "transform.translation");
  RigidTransform xf;
  std::copy(r.begin(), r.end(), xf.rotation.m.begin());
  xf.translation = {t[0], t[1], t[2]};
  require_valid(xf, "transform");
  return xf;
}

Json grasp_to_json(const GraspCandidate& cand) {
  Json j = transform_to_json(cand.grasp.pose);
  j["opening_width"] = cand.grasp.opening_width;
  if (cand.contact_a >= 0) {
    j["contact_a"] = cand.contact_a;
    j["contact_b"] = cand.contact_b;
    j["slot"] = cand.slot;
  }
  return j;
}

GraspCandidate grasp_from_json(const Json& j) {
  check_keys(j, {"rotation", "translation", "opening_width", "contact_a", "contact_b", "slot"},
             "grasp");
  GraspCandidate cand;
  cand.grasp.pose = transform_from_json(
      Json{{"rotation", j.at("rotation")}, {"translation", j.at("translation")}});
  if (!j.contains("opening_width"))
    throw ValidationError("grasp: opening_width is required");
  cand.grasp.opening_width = j.at("opening_width").get<double>();
  if (!(cand.grasp.opening_width > 0))
    throw ValidationError("grasp: opening_width must be positive");
  cand.contact_a = static_cast<int>(get_int(j, "contact_a", -1, "grasp"));
  cand.contact_b = static_cast<int>(get_int(j, "contact_b", -1, "grasp"));
  cand.slot = static_cast<int>(get_int(j, "slot", 0, "grasp"));
  return cand;
}

void write_grasps_json(const std::filesystem::path& path,
                       const std::vector<GraspCandidate>& grasps) {
  Json arr = Json::array();
  for (const GraspCandidate& g : grasps) arr.push_back(grasp_to_json(g));
  write_json_file(path, arr);
}

std::vector<GraspCandidate> read_grasps_json(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  // Also accept the pipeline's per-object candidates artifact.
  if (j.is_object() && j.contains("robot_grasps")) j = j.at("robot_grasps");
  if (!j.is_array()) throw ValidationError(path.string() + ": expected a JSON array of grasps");
  std::vector<GraspCandidate> out;
  out.reserve(j.size());
  for (const Json& g : j) out.push_back(grasp_from_json(g));
  return out;
}

void write_hands_json(const std::filesystem::path& path,
                      const std::vector<HandGrasp>& hands) {
  Json arr = Json::array();
  for (const HandGrasp& h : hands) {
    Json j = transform_to_json(h.pose);
    j["model_id"] = kHandModelId;
    arr.push_back(std::move(j));
  }
  write_json_file(path, arr);
}

std::vector<HandPoseRecord> read_hands_json(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  // Also accept the pipeline's per-object candidates artifact.
  if (j.is_object() && j.contains("hand_grasps")) j = j.at("hand_grasps");
  if (!j.is_array()) throw ValidationError(path.string() + ": expected a JSON array of hands");
  std::vector<HandPoseRecord> out;
  out.reserve(j.size());
  for (const Json& h : j) {
    check_keys(h, {"rotation", "translation", "model_id"}, "hand");
    HandPoseRecord rec;
    rec.pose = transform_from_json(
        Json{{"rotation", h.at("rotation")}, {"translation", h.at("translation")}});
    if (h.contains("model_id")) rec.model_id = h.at("model_id").get<std::string>();
    out.push_back(std::move(rec));
  }
  return out;
}

namespace {

constexpr const char* kRecordsHeader = "robot_index,hand_index,s_d,s_a,s_n,overlap,label";

}  // namespace

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<ScoreRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << kRecordsHeader << '\n';
  for (const ScoreRecord& r : records) {
    out << r.robot_index << ',' << r.hand_index << ',' << format_real(r.s_d) << ','
        << format_real(r.s_a) << ',' << format_real(r.s_n) << ','
        << (r.hulls_overlap ? 1 : 0) << ',' << static_cast<int>(r.label) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ScoreRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty records file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader)
    throw ValidationError(path.string() + ": bad header, expected '" +
                          std::string(kRecordsHeader) + "'");

  std::vector<ScoreRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> toks;
    std::istringstream iss(line);
    std::string tok;
    while (std::getline(iss, tok, ',')) toks.push_back(tok);
    if (toks.size() != 7)
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 7 fields");
    try {
      ScoreRecord r;
      r.robot_index = std::stoi(toks[0]);
      r.hand_index = std::stoi(toks[1]);
      r.s_d = std::stod(toks[2]);
      r.s_a = std::stod(toks[3]);
      r.s_n = std::stod(toks[4]);
      const int overlap = std::stoi(toks[5]);
      if (overlap != 0 && overlap != 1)
        throw ValidationError("overlap must be 0 or 1");
      r.hulls_overlap = overlap == 1;
      const int label = std::stoi(toks[6]);
      if (label < -1 || label > 1) throw ValidationError("label must be -1, 0, or 1");
      r.label = static_cast<int8_t>(label);
      out.push_back(r);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": bad field");
    }
  }
  return out;
}

Json records_to_json(const std::vector<ScoreRecord>& records) {
  Json arr = Json::array();
  for (const ScoreRecord& r : records) {
    Json j;
    j["robot_index"] = r.robot_index;
    j["hand_index"] = r.hand_index;
    j["s_d"] = r.s_d;
    j["s_a"] = r.s_a;
    j["s_n"] = r.s_n;
    j["overlap"] = r.hulls_overlap;
    j["label"] = static_cast<int>(r.label);
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<ScoreRecord> records_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("records: expected a JSON array");
  std::vector<ScoreRecord> out;
  out.reserve(j.size());
  for (const Json& item : j) {
    check_keys(item, {"robot_index", "hand_index", "s_d", "s_a", "s_n", "overlap", "label"},
               "record");
    ScoreRecord r;
    r.robot_index = static_cast<int>(get_int(item, "robot_index", 0, "record"));
    r.hand_index = static_cast<int>(get_int(item, "hand_index", 0, "record"));
    r.s_d = get_real(item, "s_d", 0.0, "record");
    r.s_a = get_real(item, "s_a", 0.0, "record");
    r.s_n = get_real(item, "s_n", 0.0, "record");
    r.hulls_overlap = get_bool(item, "overlap", false, "record");
    const int64_t label = get_int(item, "label", -1, "record");
    if (label < -1 || label > 1) throw ValidationError("record.label must be -1, 0, or 1");
    r.label = static_cast<int8_t>(label);
    out.push_back(r);
  }
  return out;
}

Json thresholds_to_json(const ObjectThresholds& th) {
  Json j;
  j["lambda_d"] = th.lambda_d;
  j["lambda_a"] = th.lambda_a;
  return j;
}

ObjectThresholds thresholds_from_json(const Json& j) {
  check_keys(j, {"lambda_d", "lambda_a"}, "thresholds");
  if (!j.contains("lambda_d") || !j.contains("lambda_a"))
    throw ValidationError("thresholds: lambda_d and lambda_a are required");
  return {j.at("lambda_d").get<double>(), j.at("lambda_a").get<double>()};
}

Json prune_to_json(const PruneResult& result, const ObjectThresholds& th,
                   double min_fraction, const std::string& cfg_hash) {
  Json j;
  j["thresholds"] = thresholds_to_json(th);
  j["min_fraction"] = min_fraction;
  j["config_hash"] = cfg_hash;
  Json accepted = Json::array();
  for (const AcceptedGrasp& a : result.accepted) {
    Json e;
    e["index"] = a.index;
    e["fraction"] = a.fraction;
    e["mean_positive_s_a"] = a.mean_positive_s_a;
    accepted.push_back(std::move(e));
  }
  j["accepted"] = std::move(accepted);
  j["rejected"] = result.rejected;
  j["fractions"] = result.fractions;
  return j;
}

void write_sweep_csv(const std::filesystem::path& path, const std::string& axis,
                     const std::vector<std::pair<double, size_t>>& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "axis,threshold,positive_count\n";
  for (const auto& [threshold, count] : table)
    out << axis << ',' << format_real(threshold, 9) << ',' << count << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": JSON parse error: " + e.what());
  }
  return j;
}

// ---------------------------------------------------------------------------
// Config

namespace {

Json gripper_to_json(const GripperParams& g) {
  Json j;
  j["max_width"] = g.max_width;
  j["finger_length"] = g.finger_length;
  j["finger_thickness"] = g.finger_thickness;
  j["palm_depth"] = g.palm_depth;
  j["sample_spacing"] = g.sample_spacing;
  return j;
}

GripperParams gripper_from_json(const Json& j) {
  check_keys(j, {"max_width", "finger_length", "finger_thickness", "palm_depth",
                 "sample_spacing"},
             "gripper");
  GripperParams g;
  g.max_width = get_real(j, "max_width", g.max_width, "gripper");
  g.finger_length = get_real(j, "finger_length", g.finger_length, "gripper");
  g.finger_thickness = get_real(j, "finger_thickness", g.finger_thickness, "gripper");
  g.palm_depth = get_real(j, "palm_depth", g.palm_depth, "gripper");
  g.sample_spacing = get_real(j, "sample_spacing", g.sample_spacing, "gripper");
  require_valid(g);
  return g;
}

Json sampler_to_json(const SamplerConfig& s) {
  Json j;
  j["friction_half_angle"] = s.friction_half_angle;
  j["max_candidates"] = s.max_candidates;
  j["approach_samples_per_axis"] = s.approach_samples_per_axis;
  j["standoff"] = s.standoff;
  j["rng_seed"] = s.rng_seed;
  j["max_attempts"] = s.max_attempts;
  return j;
}

SamplerConfig sampler_from_json(const Json& j) {
  check_keys(j, {"friction_half_angle", "max_candidates", "approach_samples_per_axis",
                 "standoff", "rng_seed", "max_attempts"},
             "sampler");
  SamplerConfig s;
  s.friction_half_angle = get_real(j, "friction_half_angle", s.friction_half_angle, "sampler");
  s.max_candidates = static_cast<int>(get_int(j, "max_candidates", s.max_candidates, "sampler"));
  s.approach_samples_per_axis = static_cast<int>(
      get_int(j, "approach_samples_per_axis", s.approach_samples_per_axis, "sampler"));
  s.standoff = get_real(j, "standoff", s.standoff, "sampler");
  s.rng_seed = static_cast<uint64_t>(get_int(j, "rng_seed", 0, "sampler"));
  s.max_attempts = static_cast<int>(get_int(j, "max_attempts", s.max_attempts, "sampler"));
  require_valid(s);
  return s;
}

Json hands_to_json(const HandSynthConfig& h) {
  Json j;
  j["n"] = h.n;
  j["radial_offset"] = h.radial_offset;
  j["azimuth_samples"] = h.azimuth_samples;
  j["rng_seed"] = h.rng_seed;
  return j;
}

HandSynthConfig hands_from_json(const Json& j) {
  check_keys(j, {"n", "radial_offset", "azimuth_samples", "rng_seed"}, "hands");
  HandSynthConfig h;
  h.n = static_cast<int>(get_int(j, "n", h.n, "hands"));
  h.radial_offset = get_real(j, "radial_offset", h.radial_offset, "hands");
  h.azimuth_samples = static_cast<int>(get_int(j, "azimuth_samples", h.azimuth_samples, "hands"));
  h.rng_seed = static_cast<uint64_t>(get_int(j, "rng_seed", 0, "hands"));
  require_valid(h);
  return h;
}

Json options_to_json(const PipelineOptions& o) {
  Json j;
  j["voxel_size"] = o.voxel_size;
  j["min_fraction"] = o.min_fraction;
  j["lower_median"] = o.lower_median;
  j["area_weighted_normals"] = o.area_weighted_normals;
  j["split"] = o.split;
  j["normals_k"] = o.normals_k;
  return j;
}

PipelineOptions options_from_json(const Json& j) {
  check_keys(j, {"voxel_size", "min_fraction", "lower_median", "area_weighted_normals",
                 "split", "normals_k"},
             "options");
  PipelineOptions o;
  o.voxel_size = get_real(j, "voxel_size", o.voxel_size, "options");
  o.min_fraction = get_real(j, "min_fraction", o.min_fraction, "options");
  o.lower_median = get_bool(j, "lower_median", o.lower_median, "options");
  o.area_weighted_normals =
      get_bool(j, "area_weighted_normals", o.area_weighted_normals, "options");
  o.split = get_real(j, "split", o.split, "options");
  o.normals_k = static_cast<int>(get_int(j, "normals_k", o.normals_k, "options"));
  if (o.voxel_size < 0) throw ValidationError("options.voxel_size must be >= 0");
  if (o.min_fraction < 0 || o.min_fraction > 1)
    throw ValidationError("options.min_fraction must be in [0, 1]");
  if (o.split <= 0 || o.split >= 1) throw ValidationError("options.split must be in (0, 1)");
  if (o.normals_k < 3) throw ValidationError("options.normals_k must be >= 3");
  return o;
}

Json object_to_json(const ObjectSpec& o) {
  Json j;
  j["kind"] = shape_kind_name(o.kind);
  j["dims"] = o.dims;
  j["spacing"] = o.spacing;
  j["translation"] = {o.pose.translation.x, o.pose.translation.y, o.pose.translation.z};
  j["rotation"] = o.pose.rotation.m;
  if (o.kind == ShapeKind::kMesh) j["mesh"] = o.mesh_path;
  return j;
}

ObjectSpec object_from_json(const Json& j) {
  check_keys(j, {"kind", "dims", "spacing", "translation", "rotation", "mesh"},
             "scene.object");
  if (!j.contains("kind")) throw ValidationError("scene.object: kind is required");
  ObjectSpec o;
  o.kind = shape_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("dims")) {
    const auto d = get_reals(j.at("dims"), 3, "scene.object.dims");
    o.dims = {d[0], d[1], d[2]};
  }
  o.spacing = get_real(j, "spacing", o.spacing, "scene.object");
  if (j.contains("translation")) {
    const auto t = get_reals(j.at("translation"), 3, "scene.object.translation");
    o.pose.translation = {t[0], t[1], t[2]};
  }
  if (j.contains("rotation")) {
    const auto r = get_reals(j.at("rotation"), 9, "scene.object.rotation");
    std::copy(r.begin(), r.end(), o.pose.rotation.m.begin());
  }
  require_valid(o.pose, "scene.object pose");
  if (j.contains("mesh")) o.mesh_path = j.at("mesh").get<std::string>();
  if (o.kind == ShapeKind::kMesh && o.mesh_path.empty())
    throw ValidationError("scene.object: mesh kind requires a mesh path");
  return o;
}

}  // namespace

Json scene_to_json(const SceneSpec& s) {
  Json j;
  j["seed"] = s.rng_seed;
  Json objects = Json::array();
  for (const ObjectSpec& o : s.objects) objects.push_back(object_to_json(o));
  j["objects"] = std::move(objects);
  return j;
}

SceneSpec scene_from_json(const Json& j) {
  check_keys(j, {"seed", "objects"}, "scene");
  SceneSpec s;
  s.rng_seed = static_cast<uint64_t>(get_int(j, "seed", 0, "scene"));
  if (j.contains("objects")) {
    if (!j.at("objects").is_array())
      throw ValidationError("scene.objects: expected an array");
    for (const Json& o : j.at("objects")) s.objects.push_back(object_from_json(o));
  }
  return s;
}

Json config_to_json(const PipelineConfig& cfg) {
  Json j;
  j["gripper"] = gripper_to_json(cfg.gripper);
  j["sampler"] = sampler_to_json(cfg.sampler);
  j["hands"] = hands_to_json(cfg.hands);
  j["options"] = options_to_json(cfg.options);
  j["scene"] = scene_to_json(cfg.scene);
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  check_keys(j, {"gripper", "sampler", "hands", "options", "scene"}, "config");
  PipelineConfig cfg;
  if (j.contains("gripper")) cfg.gripper = gripper_from_json(j.at("gripper"));
  if (j.contains("sampler")) cfg.sampler = sampler_from_json(j.at("sampler"));
  if (j.contains("hands")) cfg.hands = hands_from_json(j.at("hands"));
  if (j.contains("options")) cfg.options = options_from_json(j.at("options"));
  if (j.contains("scene")) cfg.scene = scene_from_json(j.at("scene"));
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path));
}

uint64_t fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string config_hash(const PipelineConfig& cfg) {
  const uint64_t h = fnv1a64(config_to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cograsp
