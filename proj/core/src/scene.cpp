#include "cograsp/scene.hpp"

#include <cmath>
#include <numbers>

#include "cograsp/cloud_io.hpp"
#include "cograsp/error.hpp"
#include "cograsp/triangle_mesh.hpp"

namespace cograsp {

ShapeKind shape_kind_from_name(const std::string& name) {
  if (name == "box") return ShapeKind::kBox;
  if (name == "cylinder") return ShapeKind::kCylinder;
  if (name == "sphere") return ShapeKind::kSphere;
  if (name == "mug") return ShapeKind::kMug;
  if (name == "l-handle") return ShapeKind::kLHandle;
  if (name == "mesh") return ShapeKind::kMesh;
  throw ValidationError("unknown shape kind: " + name);
}

std::string shape_kind_name(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kBox: return "box";
    case ShapeKind::kCylinder: return "cylinder";
    case ShapeKind::kSphere: return "sphere";
    case ShapeKind::kMug: return "mug";
    case ShapeKind::kLHandle: return "l-handle";
    case ShapeKind::kMesh: return "mesh";
  }
  throw ValidationError("unknown shape kind");
}

namespace {

struct Samples {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;

  void add(const Vec3& p, const Vec3& n) {
    points.push_back(p);
    normals.push_back(n);
  }
};

int cells(double extent, double spacing) {
  return std::max(1, static_cast<int>(std::ceil(extent / spacing)));
}

void sample_sphere(double r, double spacing, Samples& s) {
  const int n = std::max(
      16, static_cast<int>(std::ceil(4.0 * std::numbers::pi * r * r / (spacing * spacing))));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    const Vec3 dir{rho * std::cos(phi), rho * std::sin(phi), z};
    s.add(dir * r, dir);
  }
}

void sample_cylinder(double r, double h, double spacing, Samples& s) {
  const int nz = cells(h, spacing);
  const int nphi = cells(2.0 * std::numbers::pi * r, spacing);
  for (int kz = 0; kz < nz; ++kz) {
    const double z = -h / 2 + (kz + 0.5) * h / nz;
    for (int kp = 0; kp < nphi; ++kp) {
      const double phi = 2.0 * std::numbers::pi * (kp + 0.5) / nphi;
      const Vec3 n{std::cos(phi), std::sin(phi), 0.0};
      s.add({r * n.x, r * n.y, z}, n);
    }
  }
  const int nr = cells(r, spacing);
  for (int kr = 0; kr < nr; ++kr) {
    const double rho = (kr + 0.5) * r / nr;
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * rho / spacing)));
    for (int kp = 0; kp < m; ++kp) {
      const double phi = 2.0 * std::numbers::pi * (kp + 0.5) / m;
      for (double side : {-1.0, 1.0})
        s.add({rho * std::cos(phi), rho * std::sin(phi), side * h / 2},
              {0.0, 0.0, side});
    }
  }
}

void sample_box(const Vec3& ext, double spacing, Samples& s) {
  const Vec3 half = ext * 0.5;
  const int nx = cells(ext.x, spacing);
  const int ny = cells(ext.y, spacing);
  const int nz = cells(ext.z, spacing);
  auto cell = [](int i, int n) { return (i + 0.5) / n; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (double side : {-1.0, 1.0})
        s.add({-half.x + ext.x * cell(i, nx), -half.y + ext.y * cell(j, ny), side * half.z},
              {0.0, 0.0, side});
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k)
      for (double side : {-1.0, 1.0})
        s.add({-half.x + ext.x * cell(i, nx), side * half.y, -half.z + ext.z * cell(k, nz)},
              {0.0, side, 0.0});
  for (int j = 0; j < ny; ++j)
    for (int k = 0; k < nz; ++k)
      for (double side : {-1.0, 1.0})
        s.add({side * half.x, -half.y + ext.y * cell(j, ny), -half.z + ext.z * cell(k, nz)},
              {side, 0.0, 0.0});
}

void sample_mug(double r, double h, double ring, double spacing, Samples& s) {
  sample_cylinder(r, h, spacing, s);
  // Handle: torus segment in the x-z plane, ring center on the wall at
  // mid-height. Samples that land inside the body are dropped.
  const double tube = 0.3 * ring;
  const double u_range = 4.0;  // radians of ring arc, centered on +x
  const Vec3 center{r, 0.0, 0.0};
  const int nu = cells(ring * u_range, spacing);
  const int nv = cells(2.0 * std::numbers::pi * tube, spacing);
  for (int iu = 0; iu < nu; ++iu) {
    const double u = -u_range / 2 + (iu + 0.5) * u_range / nu;
    const Vec3 radial{std::cos(u), 0.0, std::sin(u)};
    for (int iv = 0; iv < nv; ++iv) {
      const double v = 2.0 * std::numbers::pi * (iv + 0.5) / nv;
      const Vec3 n = radial * std::cos(v) + Vec3{0.0, 1.0, 0.0} * std::sin(v);
      const Vec3 p = center + radial * (ring + tube * std::cos(v)) +
                     Vec3{0.0, tube * std::sin(v), 0.0};
      if (std::hypot(p.x, p.y) < r && std::abs(p.z) < h / 2) continue;  // buried
      s.add(p, n);
    }
  }
}

void sample_l_handle(double len_a, double len_b, double t, double spacing, Samples& s) {
  // Arm A along +x, arm B along +z, sharing the corner cube; recentred on the
  // union's bounding box afterwards.
  struct Box {
    Vec3 lo, hi;
  };
  const Box a{{0.0, 0.0, 0.0}, {len_a, t, t}};
  const Box b{{0.0, 0.0, 0.0}, {t, t, len_b}};
  auto inside = [](const Box& box, const Vec3& p) {
    const double eps = 1e-9;
    return p.x > box.lo.x + eps && p.x < box.hi.x - eps && p.y > box.lo.y + eps &&
           p.y < box.hi.y - eps && p.z > box.lo.z + eps && p.z < box.hi.z - eps;
  };
  const Vec3 shift{-len_a / 2, -t / 2, -len_b / 2};
  for (const Box* box : {&a, &b}) {
    const Box* other = box == &a ? &b : &a;
    Samples local;
    sample_box(box->hi - box->lo, spacing, local);
    const Vec3 offset = (box->lo + box->hi) * 0.5;
    for (size_t i = 0; i < local.points.size(); ++i) {
      const Vec3 p = local.points[i] + offset;
      if (inside(*other, p)) continue;
      s.add(p + shift, local.normals[i]);
    }
  }
}

void sample_mesh(const std::string& path, double spacing, Samples& s) {
  if (path.empty()) throw ValidationError("mesh object requires mesh_path");
  const TriangleMesh mesh = read_obj(path);
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    const Vec3 n = face_unit_normal(mesh, static_cast<int>(f));
    TriangleMesh one;
    one.vertices = {mesh.vertices[static_cast<size_t>(mesh.faces[f][0])],
                    mesh.vertices[static_cast<size_t>(mesh.faces[f][1])],
                    mesh.vertices[static_cast<size_t>(mesh.faces[f][2])]};
    one.faces = {{0, 1, 2}};
    const PointCloud pts = sample_surface(one, spacing);
    for (const Vec3& p : pts.points) s.add(p, n);
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0)) throw ValidationError(std::string("scene: ") + what + " must be positive");
}

}  // namespace

std::vector<SceneObject> build_scene_objects(const SceneSpec& spec) {
  if (spec.objects.empty()) throw ValidationError("scene: needs at least one object");

  std::vector<SceneObject> out;
  for (const ObjectSpec& obj : spec.objects) {
    require_positive(obj.spacing, "spacing");
    require_valid(obj.pose, "object pose");
    Samples s;
    const auto& d = obj.dims;
    switch (obj.kind) {
      case ShapeKind::kBox:
        require_positive(d[0], "box x");
        require_positive(d[1], "box y");
        require_positive(d[2], "box z");
        sample_box({d[0], d[1], d[2]}, obj.spacing, s);
        break;
      case ShapeKind::kCylinder:
        require_positive(d[0], "cylinder radius");
        require_positive(d[1], "cylinder height");
        sample_cylinder(d[0], d[1], obj.spacing, s);
        break;
      case ShapeKind::kSphere:
        require_positive(d[0], "sphere radius");
        sample_sphere(d[0], obj.spacing, s);
        break;
      case ShapeKind::kMug:
        require_positive(d[0], "mug radius");
        require_positive(d[1], "mug height");
        require_positive(d[2], "mug handle ring");
        sample_mug(d[0], d[1], d[2], obj.spacing, s);
        break;
      case ShapeKind::kLHandle:
        require_positive(d[0], "l-handle arm A");
        require_positive(d[1], "l-handle arm B");
        require_positive(d[2], "l-handle thickness");
        sample_l_handle(d[0], d[1], d[2], obj.spacing, s);
        break;
      case ShapeKind::kMesh:
        sample_mesh(obj.mesh_path, obj.spacing, s);
        break;
    }

    SceneObject so;
    so.cloud.points.reserve(s.points.size());
    so.normals.reserve(s.points.size());
    for (size_t i = 0; i < s.points.size(); ++i) {
      so.cloud.points.push_back(obj.pose.apply(s.points[i]));
      so.normals.push_back(obj.pose.rotation * s.normals[i]);
    }
    so.cloud.mask.assign(so.cloud.size(), static_cast<int8_t>(PointRole::kObject));
    require_valid(so.cloud, "scene object cloud");
    out.push_back(std::move(so));
  }
  return out;
}

std::vector<PointCloud> build_scene(const SceneSpec& spec) {
  std::vector<PointCloud> clouds;
  for (SceneObject& so : build_scene_objects(spec)) clouds.push_back(std::move(so.cloud));
  return clouds;
}

}  // namespace cograsp
