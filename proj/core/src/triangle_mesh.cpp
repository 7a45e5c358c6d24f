#include "cograsp/triangle_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cograsp/error.hpp"

namespace cograsp {

Vec3 face_normal_raw(const TriangleMesh& mesh, int face) {
  const auto& f = mesh.faces[static_cast<size_t>(face)];
  const Vec3& a = mesh.vertices[static_cast<size_t>(f[0])];
  const Vec3& b = mesh.vertices[static_cast<size_t>(f[1])];
  const Vec3& c = mesh.vertices[static_cast<size_t>(f[2])];
  return cross(b - a, c - a);
}

Vec3 face_unit_normal(const TriangleMesh& mesh, int face) {
  const Vec3 n = face_normal_raw(mesh, face);
  const double len = n.norm();
  if (len < 1e-15) throw ValidationError("degenerate face has no normal");
  return n / len;
}

double face_area(const TriangleMesh& mesh, int face) {
  return 0.5 * face_normal_raw(mesh, face).norm();
}

void require_valid(const TriangleMesh& mesh, const char* what) {
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices)
    if (!v.finite()) throw ValidationError(std::string(what) + ": non-finite vertex");
  for (size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    for (int idx : f)
      if (idx < 0 || idx >= nv)
        throw ValidationError(std::string(what) + ": face index out of range at face " +
                              std::to_string(i));
    if (face_area(mesh, static_cast<int>(i)) <= kMinFaceArea)
      throw ValidationError(std::string(what) + ": degenerate face " + std::to_string(i));
  }
}

PointCloud sample_surface(const TriangleMesh& mesh, double spacing, PointRole role) {
  if (spacing <= 0) throw ValidationError("sample_surface: spacing must be positive");
  require_valid(mesh, "sample_surface mesh");

  std::vector<Vec3> pts;
  for (size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    const Vec3& a = mesh.vertices[static_cast<size_t>(f[0])];
    const Vec3& b = mesh.vertices[static_cast<size_t>(f[1])];
    const Vec3& c = mesh.vertices[static_cast<size_t>(f[2])];
    const double longest =
        std::max({dist(a, b), dist(b, c), dist(c, a)});
    const int n = std::max(1, static_cast<int>(std::ceil(longest / spacing)));
    // Lattice p = a + (i/n)(b-a) + (j/n)(c-a), i + j <= n.
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n - i; ++j) {
        const double u = static_cast<double>(i) / n;
        const double v = static_cast<double>(j) / n;
        pts.push_back(a + (b - a) * u + (c - a) * v);
      }
  }
  return PointCloud(std::move(pts), role);
}

}  // namespace cograsp
