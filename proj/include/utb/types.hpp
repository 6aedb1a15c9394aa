#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace utb {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Components of a tangent vector of M in the coordinate frame (d/dx1, d/dx2).
using TangentVector = Vec2;

/// A point of the surface chart.
struct ChartPoint {
  double x1 = 0.0;
  double x2 = 0.0;

  Vec2 vec() const { return {x1, x2}; }
  static ChartPoint from(const Vec2& v) { return {v[0], v[1]}; }
};

inline double inner(const Mat2& g, const Vec2& a, const Vec2& b) { return a.dot(g * b); }
inline double norm(const Mat2& g, const Vec2& a) { return std::sqrt(inner(g, a, a)); }

/// +pi/2 rotation in the orientation given by the chart order (x1, x2).
inline Vec2 rotate_quarter(const Mat2& g, const Vec2& v) {
  const Vec2 lowered = g * v;
  return Vec2(-lowered[1], lowered[0]) / std::sqrt(g.determinant());
}

/// Christoffel symbols of the second kind: up[k](i, j) = Gamma^k_ij.
struct Christoffel {
  std::array<Mat2, 2> up{Mat2::Zero(), Mat2::Zero()};

  double operator()(int k, int i, int j) const { return up[k](i, j); }

  /// Gamma^k_ij a^i b^j.
  Vec2 contract(const Vec2& a, const Vec2& b) const {
    return {a.dot(up[0] * b), a.dot(up[1] * b)};
  }
};

constexpr double kPi = std::numbers::pi;

}  // namespace utb
