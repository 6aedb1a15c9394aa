#pragma once

#include "utb/surface.hpp"

#include <string>
#include <vector>

namespace utb {

/// Constants of the natural diagonal structure as supplied by the user.
struct RawParams {
  double c1 = 4.0;
  double c2 = 4.0;
  double d1 = 0.0;
  double lambda = 1.0;
  double a1 = 1.0;
  double b1 = 0.0;
};

struct StructureParams {
  double c1 = 0, c2 = 0, d1 = 0, lambda = 0, a1 = 0;
  double a2 = 0, b1 = 0, b2 = 0, alpha = 0;
  /// c1 = a1^2 c2, the condition under which phi1 is g1-compatible.
  bool phi_compatible = false;
  std::vector<std::string> warnings;

  RawParams raw() const { return {c1, c2, d1, lambda, a1, b1}; }
};

/// Fiber coordinate t = g(u,u)/2 on the unit tangent bundle.
inline constexpr double kUnitBundleT = 0.5;

/// Errors: PositivityViolation, ZeroDenominator.
StructureParams validate_params(const RawParams& raw);

/// (c1=4, d1=0, c2=4, lambda=1, a1=1, b1=0), alpha = 1.
StructureParams canonical_params();

struct BundlePoint {
  ChartPoint x;
  TangentVector u = Vec2::Zero();
};

/// Tangent vector of T1M: horizontal part h and (projected) tangential part t.
struct BundleTangent {
  TangentVector h = Vec2::Zero();
  TangentVector t = Vec2::Zero();

  BundleTangent operator+(const BundleTangent& o) const { return {h + o.h, t + o.t}; }
  BundleTangent operator-(const BundleTangent& o) const { return {h - o.h, t - o.t}; }
  BundleTangent operator-() const { return {-h, -t}; }
  BundleTangent operator*(double k) const { return {k * h, k * t}; }
  friend BundleTangent operator*(double k, const BundleTangent& a) { return a * k; }
  BundleTangent operator/(double k) const { return {h / k, t / k}; }
};

/// Base-surface data at a bundle point, computed once and reused.
struct LocalGeometry {
  BundlePoint point;
  Mat2 g = Mat2::Identity();
  Christoffel gamma;
  double K = 0.0;

  const TangentVector& u() const { return point.u; }
  double ip(const Vec2& a, const Vec2& b) const { return inner(g, a, b); }
  /// Component orthogonal to u.
  Vec2 proj(const Vec2& v) const { return v - ip(v, point.u) * point.u; }
  /// R(X,Y)Z on a surface.
  Vec2 curv(const Vec2& x, const Vec2& y, const Vec2& z) const {
    return K * (ip(y, z) * x - ip(x, z) * y);
  }
  Vec2 J(const Vec2& v) const { return rotate_quarter(g, v); }
};

/// Errors: OutOfChart, NonPositiveDefinite, InvariantViolation (|u| != 1).
LocalGeometry local_geometry(const SurfaceModel& surface, const BundlePoint& point);

/// Throws ConstraintViolation when g(A.t, u) != 0.
void check_tangent(const LocalGeometry& loc, const BundleTangent& a);

double g1(const StructureParams& params, const LocalGeometry& loc, const BundleTangent& a,
          const BundleTangent& b);
double g1(const StructureParams& params, const SurfaceModel& surface, const BundlePoint& point,
          const BundleTangent& a, const BundleTangent& b);
double g1_norm(const StructureParams& params, const LocalGeometry& loc, const BundleTangent& a);

/// The contact metric structure (phi1, xi1, eta1, g1) at one point.
struct ContactTensors {
  StructureParams params;
  LocalGeometry loc;
  BundleTangent xi;

  double eta(const BundleTangent& a) const;
  BundleTangent phi(const BundleTangent& a) const;
};

ContactTensors contact_tensors(const StructureParams& params, const LocalGeometry& loc);
ContactTensors contact_tensors(const StructureParams& params, const SurfaceModel& surface,
                               const BundlePoint& point);

enum class NablaCase { hh, ht, th, tt };

/// Parses "hh", "ht", "th" or "tt"; anything else is a CaseMismatch.
NablaCase parse_nabla_case(const std::string& name);
std::string to_string(NablaCase c);

/// nabla1 of the lifted fields in `c`, evaluated at the point of `loc`.
/// `derivative` carries nabla_X Y for hh and ht and must vanish for th and tt
/// (CaseMismatch otherwise).
BundleTangent nabla1(const StructureParams& params, const LocalGeometry& loc, NablaCase c,
                     const TangentVector& x, const TangentVector& y,
                     const TangentVector& derivative);
BundleTangent nabla1(const StructureParams& params, const SurfaceModel& surface,
                     const BundlePoint& point, NablaCase c, const TangentVector& x,
                     const TangentVector& y, const TangentVector& derivative);

/// nabla1_{E^h + W^t}(A^h + B^t) from the four cases, with the derivative
/// slots supplied as covariant derivatives along the base curve.
BundleTangent nabla1_along(const StructureParams& params, const LocalGeometry& loc,
                           const TangentVector& e, const TangentVector& w,
                           const BundleTangent& field, const TangentVector& nabla_e_h,
                           const TangentVector& nabla_e_t);

// ---------------------------------------------------------------------------
// Chart (x1, x2, psi) of T1M with u = cos(psi) e1 + sin(psi) e2, where
// (e1, e2) is Gram-Schmidt applied to (d/dx1, d/dx2).

using Christoffel3 = std::array<Mat3, 3>;  // [a](b, c) = Gamma^a_bc

struct ChartFrame {
  Vec2 e1, e2;
  std::array<double, 2> omega{0.0, 0.0};  // omega_i = g(nabla_i e1, e2)
};

ChartFrame chart_frame(const SurfaceModel& surface, const ChartPoint& p);
BundlePoint chart_bundle_point(const SurfaceModel& surface, const Vec3& y);
BundleTangent chart_to_bundle(const SurfaceModel& surface, const Vec3& y, const Vec3& v);
Vec3 bundle_to_chart(const SurfaceModel& surface, const Vec3& y, const BundleTangent& a);
/// 3x3 components of g1 in the chart.
Mat3 chart_metric(const StructureParams& params, const SurfaceModel& surface, const Vec3& y);
/// Christoffel symbols of g1 from finite differences of chart_metric.
Christoffel3 chart_connection_oracle(const StructureParams& params, const SurfaceModel& surface,
                                     const Vec3& y);

/// Covariant derivative of V(s) = v0 + s v1 (chart components) along the
/// chart line y0 + s dy, at s = 0. `oracle` uses the chart Christoffels,
/// otherwise the connection relations are used with u = X(s).
Vec3 chart_line_derivative(const StructureParams& params, const SurfaceModel& surface,
                           const Vec3& y0, const Vec3& dy, const Vec3& v0, const Vec3& v1,
                           bool oracle);

struct SasakianReport {
  bool is_sasakian = false;
  double K = 0.0;
  double a1_squared = 0.0;
};

/// Errors: NonConstantCurvature.
SasakianReport sasakian_check(const StructureParams& params, const SurfaceModel& surface);

}  // namespace utb
