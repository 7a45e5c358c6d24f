#include "cograsp/hull_contact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <vector>

#include "simplex_lp.hpp"

namespace cograsp {

namespace {

// Margin below which GJK hands the decision to the feasibility program.
constexpr double kContactMargin = 1e-9;

struct Simplex {
  std::array<Vec3, 4> pts;
  int size = 0;
};

void keep(Simplex& s, std::initializer_list<int> which) {
  Simplex out;
  for (int i : which) out.pts[out.size++] = s.pts[i];
  s = out;
}

// Closest point to the origin on segment (a, b); reduces to the support set.
Vec3 closest_on_segment(Simplex& s) {
  const Vec3 a = s.pts[0];
  const Vec3 b = s.pts[1];
  const Vec3 ab = b - a;
  const double denom = ab.norm_sq();
  if (denom <= 0.0) {
    keep(s, {0});
    return a;
  }
  const double t = -dot(a, ab) / denom;
  if (t <= 0.0) {
    keep(s, {0});
    return a;
  }
  if (t >= 1.0) {
    keep(s, {1});
    return b;
  }
  return a + ab * t;
}

// Voronoi-region walk over triangle (a, b, c) for the origin.
Vec3 closest_on_triangle(Simplex& s) {
  const Vec3 a = s.pts[0];
  const Vec3 b = s.pts[1];
  const Vec3 c = s.pts[2];
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = -a;

  const double d1 = dot(ab, ap);
  const double d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    keep(s, {0});
    return a;
  }

  const Vec3 bp = -b;
  const double d3 = dot(ab, bp);
  const double d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) {
    keep(s, {1});
    return b;
  }

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    keep(s, {0, 1});
    return a + ab * (d1 / (d1 - d3));
  }

  const Vec3 cp = -c;
  const double d5 = dot(ab, cp);
  const double d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) {
    keep(s, {2});
    return c;
  }

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    keep(s, {0, 2});
    return a + ac * (d2 / (d2 - d6));
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) {
    keep(s, {1, 2});
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

struct ReduceResult {
  Vec3 closest;
  bool contains_origin = false;
  double containment_margin = 0.0;  // min distance to a tetra face when contained
};

ReduceResult closest_and_reduce(Simplex& s) {
  ReduceResult res;
  if (s.size == 1) {
    res.closest = s.pts[0];
    return res;
  }
  if (s.size == 2) {
    res.closest = closest_on_segment(s);
    return res;
  }
  if (s.size == 3) {
    res.closest = closest_on_triangle(s);
    return res;
  }

  // Tetrahedron: test the origin against each face plane (sided toward the
  // opposite vertex); recurse into the faces the origin lies outside of.
  static constexpr int kFaces[4][4] = {
      {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 3, 2, 0}};
  bool outside_any = false;
  double best_sq = std::numeric_limits<double>::infinity();
  Simplex best_sub;
  Vec3 best_pt{};
  double min_inside_dist = std::numeric_limits<double>::infinity();

  for (const auto& f : kFaces) {
    const Vec3 a = s.pts[f[0]];
    const Vec3 b = s.pts[f[1]];
    const Vec3 c = s.pts[f[2]];
    const Vec3 d = s.pts[f[3]];
    const Vec3 n = cross(b - a, c - a);
    const double nn = n.norm();
    if (nn <= 0.0) continue;  // flat tetra; other faces carry the answer
    const double origin_side = dot(n, -a);
    const double opposite_side = dot(n, d - a);
    if (origin_side * opposite_side < 0.0 || opposite_side == 0.0) {
      outside_any = true;
      Simplex sub;
      sub.pts[0] = a;
      sub.pts[1] = b;
      sub.pts[2] = c;
      sub.size = 3;
      const Vec3 pt = closest_on_triangle(sub);
      const double d2 = pt.norm_sq();
      if (d2 < best_sq) {
        best_sq = d2;
        best_sub = sub;
        best_pt = pt;
      }
    } else {
      min_inside_dist = std::min(min_inside_dist, std::abs(origin_side) / nn);
    }
  }

  if (!outside_any) {
    res.contains_origin = true;
    res.containment_margin = min_inside_dist;
    res.closest = Vec3{};
    return res;
  }
  s = best_sub;
  res.closest = best_pt;
  return res;
}

enum class GjkVerdict { kSeparated, kContained, kMarginal };

GjkVerdict gjk_classify(const ConvexHull& a, const ConvexHull& b) {
  auto support = [&](const Vec3& dir) { return a.support(dir) - b.support(-dir); };

  Vec3 dir = centroid(a.vertices) - centroid(b.vertices);
  if (dir.norm_sq() < 1e-24) dir = {1, 0, 0};

  Simplex simplex;
  Vec3 v = support(dir);
  simplex.pts[simplex.size++] = v;

  for (int iter = 0; iter < 128; ++iter) {
    const double v2 = v.norm_sq();
    if (v2 <= 1e-22) return GjkVerdict::kMarginal;  // origin reached within noise

    const Vec3 w = support(-v);
    const double vw = dot(v, w);
    // h(-v/|v|) = -vw/|v| is a support-plane bound: vw/|v| lower-bounds the
    // separation distance.
    if (vw / std::sqrt(v2) > kContactMargin) return GjkVerdict::kSeparated;
    // No significant progress possible: distance ~= |v| with the lower bound
    // already below the margin.
    if (v2 - vw <= 1e-12 * v2) return GjkVerdict::kMarginal;
    for (int i = 0; i < simplex.size; ++i)
      if (dist_sq(simplex.pts[i], w) <= 1e-28) return GjkVerdict::kMarginal;

    simplex.pts[simplex.size++] = w;
    const ReduceResult res = closest_and_reduce(simplex);
    if (res.contains_origin)
      return res.containment_margin > 1e-11 ? GjkVerdict::kContained : GjkVerdict::kMarginal;
    v = res.closest;
  }
  return GjkVerdict::kMarginal;
}

}  // namespace

namespace detail {

double min_inflation(const ConvexHull& a, const ConvexHull& b) {
  const int rows = static_cast<int>(a.faces.size() + b.faces.size());
  // A point lies in both hulls inflated by t iff n.x <= d + t for every face
  // (n, d). Substituting t = t0 - theta, with t0 large enough that every
  // shifted offset is positive, makes x = 0 / theta = 0 feasible: the slack
  // columns form an identity start basis and no phase 1 is needed.
  // Variables: x+ (3), x- (3), theta, slack per row.
  const int num_vars = 7 + rows;
  SimplexLp lp(num_vars, rows);

  double min_offset = 0.0;
  for (const ConvexHull* hull : {&a, &b})
    for (double d : hull->face_offsets) min_offset = std::min(min_offset, d);
  const double t0 = 1.0 - min_offset;

  std::vector<int> start_basis(static_cast<size_t>(rows));
  int r = 0;
  for (const ConvexHull* hull : {&a, &b}) {
    for (size_t f = 0; f < hull->faces.size(); ++f, ++r) {
      const Vec3 n = hull->face_normals[f];
      lp.coeff(r, 0) = n.x;
      lp.coeff(r, 1) = n.y;
      lp.coeff(r, 2) = n.z;
      lp.coeff(r, 3) = -n.x;
      lp.coeff(r, 4) = -n.y;
      lp.coeff(r, 5) = -n.z;
      lp.coeff(r, 6) = 1.0;
      lp.coeff(r, 7 + r) = 1.0;
      lp.rhs(r) = hull->face_offsets[f] + t0;
      start_basis[r] = 7 + r;
    }
  }

  // Minimizing t = t0 - theta is minimizing -theta; theta is bounded because
  // deflating bounded hulls eventually empties their intersection.
  std::vector<double> cost(static_cast<size_t>(num_vars), 0.0);
  cost[6] = -1.0;
  return t0 + lp.minimize(cost, start_basis);
}

}  // namespace detail

bool hulls_intersect(const ConvexHull& a, const ConvexHull& b) {
  if (a.vertices.empty() || b.vertices.empty() || a.faces.empty() || b.faces.empty())
    throw ValidationError("hulls_intersect: invalid hull");
  switch (gjk_classify(a, b)) {
    case GjkVerdict::kSeparated:
      return false;
    case GjkVerdict::kContained:
      return true;
    case GjkVerdict::kMarginal:
      return detail::min_inflation(a, b) <= 1e-12;
  }
  return false;  // unreachable
}

}  // namespace cograsp
