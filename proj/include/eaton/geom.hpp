// Plane vectors, 2x2 real matrices and the shared tolerances.
#pragma once

#include <cmath>
#include <string>

#include "eaton/errors.hpp"

namespace eaton {

// Determinant tolerance for unimodularity checks.
inline constexpr double kDetTol = 1e-9;
// Positional comparisons use kPosTol * (1 + |coordinate|).
inline constexpr double kPosTol = 1e-9;
// Relative slack for strict geometric inequalities (admissibility).
inline constexpr double kStrictRel = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {
    if (!std::isfinite(x) || !std::isfinite(y))
      throw Error("Vec2: non-finite component");
  }

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend Vec2 operator*(double s, Vec2 v) { return v * s; }

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // Signed area of the parallelogram spanned by *this and o.
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

inline bool nearly_equal(double a, double b, double tol = kPosTol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

inline bool nearly_equal(Vec2 a, Vec2 b, double tol = kPosTol) {
  return nearly_equal(a.x, b.x, tol) && nearly_equal(a.y, b.y, tol);
}

// Row-major 2x2 real matrix.
struct Mat2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.x, c2.x, c1.y, c2.y}; }
  static Mat2 rotation(double angle) {
    double co = std::cos(angle), si = std::sin(angle);
    return {co, -si, si, co};
  }

  double det() const { return a * d - b * c; }
  Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Vec2 col1() const { return {a, c}; }
  Vec2 col2() const { return {b, d}; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }

  Mat2 inverse() const {
    double dt = det();
    if (std::abs(dt) < kDetTol) throw DegenerateBasis("Mat2: singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  double trace() const { return a + d; }
};

// Canonical representative of an unoriented line direction: unit length,
// second component positive, or first positive when the second vanishes.
inline Vec2 normalize_line_direction(Vec2 v) {
  double n = v.norm();
  if (n == 0.0) throw Error("normalize_line_direction: zero vector");
  Vec2 u{v.x / n, v.y / n};
  if (u.y < 0.0 || (u.y == 0.0 && u.x < 0.0)) u = -u;
  return u;
}

}  // namespace eaton
