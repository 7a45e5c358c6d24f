#include "cograsp/embodiment.hpp"

#include <algorithm>
#include <cmath>

#include "cograsp/error.hpp"

namespace cograsp {

void require_valid(const GripperParams& params) {
  if (!(params.max_width > 0) || !(params.finger_length > 0) ||
      !(params.finger_thickness > 0) || !(params.palm_depth > 0) ||
      !(params.sample_spacing > 0))
    throw ValidationError("gripper params: all dimensions must be positive");
  if (!(params.sample_spacing < params.finger_thickness))
    throw ValidationError("gripper params: sample_spacing must be below finger_thickness");
}

Vec3 gripper_approach(const GraspPose& grasp) {
  require_valid(grasp.pose, "grasp pose");
  return grasp.pose.rotation.col(2);
}

Vec3 gripper_baseline(const GraspPose& grasp) {
  require_valid(grasp.pose, "grasp pose");
  return grasp.pose.rotation.col(0);
}

namespace {

// Cell-center lattice over all six faces of an axis-aligned box. Cell centers
// avoid edge duplicates and keep the sampling mirror-symmetric.
void sample_box_surface(const Vec3& lo, const Vec3& hi, double spacing,
                        std::vector<Vec3>& out) {
  const Vec3 ext = hi - lo;
  const int nx = std::max(1, static_cast<int>(std::ceil(ext.x / spacing)));
  const int ny = std::max(1, static_cast<int>(std::ceil(ext.y / spacing)));
  const int nz = std::max(1, static_cast<int>(std::ceil(ext.z / spacing)));

  auto at = [&](double fx, double fy, double fz) {
    return Vec3{lo.x + ext.x * fx, lo.y + ext.y * fy, lo.z + ext.z * fz};
  };
  auto cell = [](int i, int n) { return (i + 0.5) / n; };

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      out.push_back(at(cell(i, nx), cell(j, ny), 0.0));
      out.push_back(at(cell(i, nx), cell(j, ny), 1.0));
    }
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k) {
      out.push_back(at(cell(i, nx), 0.0, cell(k, nz)));
      out.push_back(at(cell(i, nx), 1.0, cell(k, nz)));
    }
  for (int j = 0; j < ny; ++j)
    for (int k = 0; k < nz; ++k) {
      out.push_back(at(0.0, cell(j, ny), cell(k, nz)));
      out.push_back(at(1.0, cell(j, ny), cell(k, nz)));
    }
}

}  // namespace

PointCloud render_gripper(const GripperParams& params, const GraspPose& grasp) {
  require_valid(params);
  require_valid(grasp.pose, "grasp pose");
  if (!(grasp.opening_width > 0))
    throw ValidationError("render_gripper: opening_width must be positive");
  if (grasp.opening_width > params.max_width)
    throw ValidationError("render_gripper: opening_width exceeds max_width");

  const double w = grasp.opening_width;
  const double th = params.finger_thickness;
  const double fl = params.finger_length;

  // Canonical frame: fingertip midpoint at origin, baseline +x, approach +z.
  // Fingers span z in [-finger_length, 0]; palm body sits behind them.
  std::vector<Vec3> pts;
  sample_box_surface({w / 2 - th / 2, -th / 2, -fl}, {w / 2 + th / 2, th / 2, 0.0},
                     params.sample_spacing, pts);
  sample_box_surface({-w / 2 - th / 2, -th / 2, -fl}, {-w / 2 + th / 2, th / 2, 0.0},
                     params.sample_spacing, pts);
  const double palm_half_x = params.max_width / 2 + th / 2;
  sample_box_surface({-palm_half_x, -th / 2, -fl - params.palm_depth},
                     {palm_half_x, th / 2, -fl}, params.sample_spacing, pts);

  return transform_cloud(PointCloud(std::move(pts), PointRole::kGripper), grasp.pose);
}

namespace {

// Appends an axis-aligned box as 12 CCW-outward triangles.
void append_box(TriangleMesh& mesh, const Vec3& lo, const Vec3& hi) {
  const int base = static_cast<int>(mesh.vertices.size());
  for (int c = 0; c < 8; ++c)
    mesh.vertices.push_back(Vec3{c & 1 ? hi.x : lo.x, c & 2 ? hi.y : lo.y,
                                 c & 4 ? hi.z : lo.z});
  static constexpr int kQuads[6][4] = {
      {0, 2, 3, 1},  // z = lo (viewed from -z: CCW)
      {4, 5, 7, 6},  // z = hi
      {0, 1, 5, 4},  // y = lo
      {2, 6, 7, 3},  // y = hi
      {0, 4, 6, 2},  // x = lo
      {1, 3, 7, 5},  // x = hi
  };
  for (const auto& q : kQuads) {
    mesh.faces.push_back({base + q[0], base + q[1], base + q[2]});
    mesh.faces.push_back({base + q[0], base + q[2], base + q[3]});
  }
}

void transform_last_vertices(TriangleMesh& mesh, size_t count, const RigidTransform& xf) {
  for (size_t i = mesh.vertices.size() - count; i < mesh.vertices.size(); ++i)
    mesh.vertices[i] = xf.apply(mesh.vertices[i]);
}

}  // namespace

HandModel make_hand_model(double sample_spacing) {
  if (!(sample_spacing > 0) || sample_spacing > 0.005)
    throw ValidationError("hand model: sample spacing must be in (0, 0.005]");

  HandModel model;
  TriangleMesh& mesh = model.template_mesh;

  // Palm slab with a shallow-V inner (top) surface: valley along y at x = 0,
  // edges raised to z = rise. Inner surface faces +z.
  const double hw = 0.04;    // half width (x)
  const double hl = 0.05;    // half length (y)
  const double thick = 0.015;
  const double rise = 0.004;

  const int b0 = 0;
  mesh.vertices = {
      {-hw, -hl, -thick}, {hw, -hl, -thick}, {hw, hl, -thick}, {-hw, hl, -thick},  // 0-3 bottom
      {0.0, -hl, 0.0},    {0.0, hl, 0.0},                                          // 4-5 valley
      {-hw, -hl, rise},   {hw, -hl, rise},   {hw, hl, rise},   {-hw, hl, rise},    // 6-9 edges
  };
  auto face = [&](int a, int b, int c) { mesh.faces.push_back({b0 + a, b0 + b, b0 + c}); };
  // Inner palm surface: two tilted quads, four triangles. These are the
  // palm_faces the approach vector averages over; their normals tilt toward
  // the valley and average to +z exactly.
  face(6, 4, 5);
  face(6, 5, 9);
  face(4, 7, 8);
  face(4, 8, 5);
  model.palm_faces = {0, 1, 2, 3};
  // Bottom, then the two pentagonal y sides (fan through the valley vertex)
  // and the two rectangular x sides.
  face(0, 2, 1);
  face(0, 3, 2);
  face(0, 1, 7);
  face(0, 7, 4);
  face(0, 4, 6);
  face(3, 8, 2);
  face(3, 5, 8);
  face(3, 9, 5);
  face(1, 2, 8);
  face(1, 8, 7);
  face(0, 9, 3);
  face(0, 6, 9);

  // Four finger slabs extending +y from the palm edge.
  const double fw = 0.014, fl = 0.045, ft = 0.012;
  for (int f = 0; f < 4; ++f) {
    const double cx = -0.03 + 0.02 * f;
    append_box(mesh, {cx - fw / 2, hl, -ft}, {cx + fw / 2, hl + fl, 0.0});
  }
  // Thumb: slab angled outward from the -x palm corner.
  append_box(mesh, {-0.008, 0.0, -ft}, {0.008, 0.05, 0.0});
  RigidTransform thumb_xf{Mat3::from_axis_angle({0, 0, 1}, 0.9), {-0.048, 0.005, -0.002}};
  transform_last_vertices(mesh, 8, thumb_xf);

  require_valid(mesh, "hand template");
  model.surface_cloud = sample_surface(mesh, sample_spacing, PointRole::kHand);
  return model;
}

Vec3 hand_approach(const HandModel& model, const RigidTransform& pose,
                   NormalAveraging mode) {
  if (model.palm_faces.empty()) throw ValidationError("hand model has no palm faces");
  require_valid(pose, "hand pose");
  Vec3 sum{};
  for (int f : model.palm_faces) {
    if (f < 0 || f >= static_cast<int>(model.template_mesh.faces.size()))
      throw ValidationError("palm face index out of range");
    const Vec3 raw = face_normal_raw(model.template_mesh, f);
    const double len = raw.norm();
    if (len < 2 * kMinFaceArea) throw ValidationError("degenerate palm face");
    sum += mode == NormalAveraging::kUnweighted ? raw / len : raw * 0.5;
  }
  const Vec3 posed = pose.rotation * sum;
  if (posed.norm() < 1e-9)
    throw DegenerateInputError("hand approach: palm normals cancel");
  return posed.normalized();
}

HandGrasp pose_hand(const HandModel& model, const RigidTransform& pose,
                    NormalAveraging mode) {
  HandGrasp grasp;
  grasp.pose = pose;
  grasp.cloud = transform_cloud(model.surface_cloud, pose);
  grasp.approach = hand_approach(model, pose, mode);
  return grasp;
}

}  // namespace cograsp
