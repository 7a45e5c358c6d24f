#pragma once

#include <array>
#include <cmath>

namespace cograsp {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  constexpr bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  constexpr double norm_sq() const { return x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm_sq()); }
  Vec3 normalized() const {
    const double n = norm();
    return {x / n, y / n, z / n};
  }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

// Squared distance. Every distance in this library funnels through this one
// expression so that accelerated and brute-force paths agree bit for bit.
inline double dist_sq(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

inline double dist(const Vec3& a, const Vec3& b) { return std::sqrt(dist_sq(a, b)); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static constexpr Mat3 identity() { return Mat3{}; }

  static Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    return Mat3{{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
  }
  static Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
  }

  // Rodrigues formula; axis must be unit length.
  static Mat3 from_axis_angle(const Vec3& axis, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    const double ax = axis.x, ay = axis.y, az = axis.z;
    return Mat3{{t * ax * ax + c, t * ax * ay - s * az, t * ax * az + s * ay,
                 t * ax * ay + s * az, t * ay * ay + c, t * ay * az - s * ax,
                 t * ax * az - s * ay, t * ay * az + s * ax, t * az * az + c}};
  }

  double operator()(int r, int c) const { return m[static_cast<size_t>(r) * 3 + c]; }
  double& operator()(int r, int c) { return m[static_cast<size_t>(r) * 3 + c]; }

  Vec3 row(int r) const { return {m[r * 3 + 0], m[r * 3 + 1], m[r * 3 + 2]}; }
  Vec3 col(int c) const { return {m[0 + c], m[3 + c], m[6 + c]}; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Mat3 transposed() const {
    return Mat3{{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  bool finite() const {
    for (double v : m)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

// Orthonormality with determinant +1, checked entrywise against R^T R = I.
inline bool is_rotation(const Mat3& r, double tol) {
  if (!r.finite()) return false;
  const Mat3 g = r.transposed() * r;
  const Mat3 id = Mat3::identity();
  for (int i = 0; i < 9; ++i)
    if (std::abs(g.m[i] - id.m[i]) > tol) return false;
  return std::abs(r.det() - 1.0) <= tol;
}

// Shortest rotation taking unit vector `from` onto unit vector `to`.
inline Mat3 rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 axis = cross(from, to);
  const double s = axis.norm();
  const double c = dot(from, to);
  if (s < 1e-12) {
    if (c > 0.0) return Mat3::identity();
    // Antiparallel: rotate pi about any axis orthogonal to `from`.
    Vec3 ortho = std::abs(from.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    ortho = (ortho - from * dot(ortho, from)).normalized();
    return Mat3::from_axis_angle(ortho, M_PI);
  }
  return Mat3::from_axis_angle(axis / s, std::atan2(s, c));
}

// Some unit vector orthogonal to `v` (unit length input).
inline Vec3 any_orthonormal(const Vec3& v) {
  const Vec3 e = std::abs(v.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  return cross(v, e).normalized();
}

}  // namespace cograsp
