#include "cograsp/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Dense>

#include "cograsp/error.hpp"

namespace cograsp {

double ConvexHull::max_plane_distance(const Vec3& p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t f = 0; f < faces.size(); ++f)
    worst = std::max(worst, dot(face_normals[f], p) - face_offsets[f]);
  return worst;
}

double ConvexHull::volume() const {
  double six_v = 0.0;
  for (const auto& f : faces) {
    const Vec3& a = vertices[f[0]];
    const Vec3& b = vertices[f[1]];
    const Vec3& c = vertices[f[2]];
    six_v += dot(a, cross(b, c));
  }
  return six_v / 6.0;
}

const Vec3& ConvexHull::support(const Vec3& dir) const {
  int best = 0;
  double best_dot = dot(vertices[0], dir);
  for (size_t i = 1; i < vertices.size(); ++i) {
    const double d = dot(vertices[i], dir);
    if (d > best_dot) {
      best_dot = d;
      best = static_cast<int>(i);
    }
  }
  return vertices[best];
}

namespace {

struct Face {
  std::array<int, 3> v;
  std::array<int, 3> neighbor;  // neighbor[i] across edge (v[i], v[i+1])
  Vec3 normal;                  // unit, outward
  double offset;
  bool alive = true;
  std::vector<int> conflicts;
  int furthest = -1;
  double furthest_dist = 0.0;
};

struct HullBuilder {
  const std::vector<Vec3>& pts;
  double eps;
  std::vector<Face> faces;

  explicit HullBuilder(const std::vector<Vec3>& points) : pts(points) {}

  double plane_dist(const Face& f, int p) const { return dot(f.normal, pts[p]) - f.offset; }

  void set_plane(Face& f) {
    const Vec3& a = pts[f.v[0]];
    const Vec3& b = pts[f.v[1]];
    const Vec3& c = pts[f.v[2]];
    f.normal = cross(b - a, c - a).normalized();
    f.offset = dot(f.normal, (a + b + c) / 3.0);
  }

  void add_conflict(Face& f, int p, double d) {
    f.conflicts.push_back(p);
    if (d > f.furthest_dist) {
      f.furthest_dist = d;
      f.furthest = p;
    }
  }

  // Assigns p to the face it is furthest outside of, if any.
  bool assign_point(int p, const std::vector<int>& candidate_faces) {
    int best_face = -1;
    double best_dist = eps;
    for (int fi : candidate_faces) {
      if (!faces[fi].alive) continue;
      const double d = plane_dist(faces[fi], p);
      if (d > best_dist) {
        best_dist = d;
        best_face = fi;
      }
    }
    if (best_face < 0) return false;
    add_conflict(faces[best_face], p, best_dist);
    return true;
  }

  void build_initial_tetrahedron() {
    const int n = static_cast<int>(pts.size());

    // Extreme points along the axes give a well-spread starting set.
    std::array<int, 6> extreme{0, 0, 0, 0, 0, 0};
    for (int i = 1; i < n; ++i) {
      if (pts[i].x < pts[extreme[0]].x) extreme[0] = i;
      if (pts[i].x > pts[extreme[1]].x) extreme[1] = i;
      if (pts[i].y < pts[extreme[2]].y) extreme[2] = i;
      if (pts[i].y > pts[extreme[3]].y) extreme[3] = i;
      if (pts[i].z < pts[extreme[4]].z) extreme[4] = i;
      if (pts[i].z > pts[extreme[5]].z) extreme[5] = i;
    }

    double scale = 1e-3;
    for (int e : extreme)
      scale = std::max({scale, std::abs(pts[e].x), std::abs(pts[e].y), std::abs(pts[e].z)});
    eps = 1e-10 * scale;

    int i0 = -1, i1 = -1;
    double best = -1.0;
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) {
        const double d = dist_sq(pts[extreme[a]], pts[extreme[b]]);
        if (d > best) {
          best = d;
          i0 = extreme[a];
          i1 = extreme[b];
        }
      }
    if (best <= eps * eps) throw DegenerateInputError("build_hull: all points coincide");

    // Furthest point from the baseline.
    const Vec3 dir = (pts[i1] - pts[i0]).normalized();
    int i2 = -1;
    best = eps;
    for (int i = 0; i < n; ++i) {
      const Vec3 rel = pts[i] - pts[i0];
      const double d = (rel - dir * dot(rel, dir)).norm();
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    if (i2 < 0) throw DegenerateInputError("build_hull: points are collinear");

    // Furthest point from the base plane.
    const Vec3 plane_n = cross(pts[i1] - pts[i0], pts[i2] - pts[i0]).normalized();
    const double plane_d = dot(plane_n, pts[i0]);
    int i3 = -1;
    best = eps;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs(dot(plane_n, pts[i]) - plane_d);
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (i3 < 0) throw DegenerateInputError("build_hull: points are coplanar");

    if (dot(plane_n, pts[i3]) - plane_d > 0.0) std::swap(i1, i2);  // keep i3 below (i0,i1,i2)

    faces.resize(4);
    faces[0].v = {i0, i1, i2};
    faces[1].v = {i0, i3, i1};
    faces[2].v = {i1, i3, i2};
    faces[3].v = {i2, i3, i0};
    faces[0].neighbor = {1, 2, 3};
    faces[1].neighbor = {3, 2, 0};
    faces[2].neighbor = {1, 3, 0};
    faces[3].neighbor = {2, 1, 0};
    for (Face& f : faces) set_plane(f);

    const std::vector<int> all_faces{0, 1, 2, 3};
    for (int p = 0; p < n; ++p) {
      if (p == i0 || p == i1 || p == i2 || p == i3) continue;
      assign_point(p, all_faces);
    }
  }

  void run() {
    build_initial_tetrahedron();

    std::vector<int> stack;
    for (int i = 0; i < 4; ++i)
      if (!faces[i].conflicts.empty()) stack.push_back(i);

    std::vector<int> visible;
    std::vector<char> visited;
    struct HorizonEdge {
      int a, b;        // oriented as in the visible face
      int hidden;      // face kept on the other side
      int hidden_slot; // edge slot in the hidden face
    };
    std::vector<HorizonEdge> horizon;

    const size_t iteration_cap = 16 * pts.size() + 64;
    size_t iterations = 0;

    while (!stack.empty()) {
      if (++iterations > iteration_cap) throw Error("build_hull: did not converge");
      const int seed = stack.back();
      stack.pop_back();
      Face& sf = faces[seed];
      if (!sf.alive || sf.conflicts.empty()) continue;
      const int apex = sf.furthest;

      // Flood fill the faces visible from the apex and collect the horizon.
      visible.clear();
      horizon.clear();
      visited.assign(faces.size(), 0);
      visible.push_back(seed);
      visited[seed] = 1;
      for (size_t k = 0; k < visible.size(); ++k) {
        const Face f = faces[visible[k]];  // copy: faces may reallocate later
        for (int e = 0; e < 3; ++e) {
          const int ni = f.neighbor[e];
          if (visited[ni]) continue;
          if (plane_dist(faces[ni], apex) > eps) {
            visited[ni] = 1;
            visible.push_back(ni);
          } else {
            // Edge (a, b) of the visible face; find its slot in the neighbor.
            const int a = f.v[e];
            const int b = f.v[(e + 1) % 3];
            int slot = -1;
            for (int s = 0; s < 3; ++s)
              if (faces[ni].v[s] == b && faces[ni].v[(s + 1) % 3] == a) slot = s;
            horizon.push_back({a, b, ni, slot});
          }
        }
      }

      // Orphan the conflict points of every visible face.
      std::vector<int> orphans;
      for (int fi : visible) {
        Face& f = faces[fi];
        f.alive = false;
        for (int p : f.conflicts)
          if (p != apex) orphans.push_back(p);
        f.conflicts.clear();
      }

      // One new face per horizon edge, stitched via an edge map.
      std::unordered_map<int64_t, std::pair<int, int>> open_edges;  // key(a,b) -> (face, slot)
      auto edge_key = [](int a, int b) {
        return (static_cast<int64_t>(a) << 32) | static_cast<uint32_t>(b);
      };
      std::vector<int> new_faces;
      new_faces.reserve(horizon.size());
      for (const HorizonEdge& he : horizon) {
        Face nf;
        nf.v = {he.a, he.b, apex};
        nf.neighbor = {he.hidden, -1, -1};
        set_plane(nf);
        const int idx = static_cast<int>(faces.size());
        faces.push_back(nf);
        faces[he.hidden].neighbor[he.hidden_slot] = idx;
        new_faces.push_back(idx);

        // Edges (b, apex) and (apex, a) pair up with reversed copies on
        // adjacent new faces.
        const std::array<std::pair<int, int>, 2> open{{{he.b, apex}, {apex, he.a}}};
        for (int s = 1; s <= 2; ++s) {
          const auto [ea, eb] = open[s - 1];
          const auto rev = open_edges.find(edge_key(eb, ea));
          if (rev != open_edges.end()) {
            faces[idx].neighbor[s] = rev->second.first;
            faces[rev->second.first].neighbor[rev->second.second] = idx;
            open_edges.erase(rev);
          } else {
            open_edges.emplace(edge_key(ea, eb), std::make_pair(idx, s));
          }
        }
      }
      if (!open_edges.empty()) throw Error("build_hull: open horizon loop");

      std::sort(orphans.begin(), orphans.end());
      for (int p : orphans) assign_point(p, new_faces);
      for (int fi : new_faces)
        if (!faces[fi].conflicts.empty()) stack.push_back(fi);
    }
  }

  ConvexHull finish() const {
    // Canonical form: vertices in input order, faces rotated to start at the
    // smallest index and sorted.
    std::vector<int> remap(pts.size(), -1);
    ConvexHull hull;
    std::vector<int> used;
    for (const Face& f : faces)
      if (f.alive)
        for (int v : f.v) {
          if (remap[v] == -1) {
            remap[v] = 0;
            used.push_back(v);
          }
        }
    std::sort(used.begin(), used.end());
    hull.vertices.reserve(used.size());
    for (size_t i = 0; i < used.size(); ++i) {
      remap[used[i]] = static_cast<int>(i);
      hull.vertices.push_back(pts[used[i]]);
    }

    for (const Face& f : faces) {
      if (!f.alive) continue;
      std::array<int, 3> tri{remap[f.v[0]], remap[f.v[1]], remap[f.v[2]]};
      const int lo = static_cast<int>(std::min_element(tri.begin(), tri.end()) - tri.begin());
      std::rotate(tri.begin(), tri.begin() + lo, tri.end());
      hull.faces.push_back(tri);
    }
    std::sort(hull.faces.begin(), hull.faces.end());

    hull.face_normals.reserve(hull.faces.size());
    hull.face_offsets.reserve(hull.faces.size());
    for (const auto& tri : hull.faces) {
      const Vec3& a = hull.vertices[tri[0]];
      const Vec3& b = hull.vertices[tri[1]];
      const Vec3& c = hull.vertices[tri[2]];
      const Vec3 n = cross(b - a, c - a).normalized();
      hull.face_normals.push_back(n);
      hull.face_offsets.push_back(dot(n, (a + b + c) / 3.0));
    }
    return hull;
  }
};

}  // namespace

ConvexHull build_hull(const std::vector<Vec3>& points) {
  if (points.size() < 4)
    throw DegenerateInputError("build_hull: need at least 4 points, got " +
                               std::to_string(points.size()));
  for (const Vec3& p : points)
    if (!p.finite()) throw ValidationError("build_hull: non-finite coordinate");
  HullBuilder builder(points);
  builder.run();
  return builder.finish();
}

namespace {

// Best-fit plane normal via the covariance's smallest principal axis; falls
// back to fixed axes for lines and single points.
Vec3 padding_normal(const std::vector<Vec3>& pts) {
  const Vec3 c = centroid(pts);
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const Vec3& p : pts) {
    const Eigen::Vector3d v(p.x - c.x, p.y - c.y, p.z - c.z);
    cov += v * v.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d n = solver.eigenvectors().col(0);
  return Vec3{n.x(), n.y(), n.z()}.normalized();
}

std::vector<Vec3> pad_points(const std::vector<Vec3>& pts, const Vec3& axis) {
  std::vector<Vec3> out;
  out.reserve(pts.size() * 2);
  for (const Vec3& p : pts) {
    out.push_back(p + axis * kHullPadding);
    out.push_back(p - axis * kHullPadding);
  }
  return out;
}

}  // namespace

ConvexHull build_hull_padded(const PointCloud& cloud) {
  require_valid(cloud, "build_hull_padded");
  std::vector<Vec3> pts = cloud.points;
  // Each round pads along the current smallest principal axis, so a plane
  // becomes a slab, a line a strip then a slab, a point a segment and so on.
  // Three rounds suffice for any non-empty input.
  for (int round = 0; round <= 3; ++round) {
    if (pts.size() >= 4) {
      try {
        return build_hull(pts);
      } catch (const DegenerateInputError&) {
        if (round == 3) throw;
      }
    }
    pts = pad_points(pts, padding_normal(pts));
  }
  throw DegenerateInputError("build_hull_padded: could not produce a 3D hull");
}

}  // namespace cograsp
