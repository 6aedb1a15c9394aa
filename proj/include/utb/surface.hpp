#pragma once

#include "utb/expression.hpp"
#include "utb/types.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace utb {

/// Open coordinate box of a single chart. Infinite bounds are allowed.
struct ChartDomain {
  double lo1 = -std::numeric_limits<double>::infinity();
  double hi1 = std::numeric_limits<double>::infinity();
  double lo2 = -std::numeric_limits<double>::infinity();
  double hi2 = std::numeric_limits<double>::infinity();

  bool contains(const ChartPoint& p) const {
    return p.x1 > lo1 && p.x1 < hi1 && p.x2 > lo2 && p.x2 < hi2;
  }
};

/// Colatitude margin of the sphere chart (theta in (eps, pi - eps)).
inline constexpr double kSpherePoleMargin = 1e-3;

/// Metric value with its first and second partial derivatives.
struct MetricJet {
  Mat2 g = Mat2::Identity();
  std::array<Mat2, 2> dg{Mat2::Zero(), Mat2::Zero()};                       // dg[l] = d_l g
  std::array<std::array<Mat2, 2>, 2> ddg{{{Mat2::Zero(), Mat2::Zero()},
                                          {Mat2::Zero(), Mat2::Zero()}}};  // ddg[l][m]
};

/// A Riemannian surface in one chart.
///
/// The builtin kinds carry closed-form Christoffel symbols and curvature.
/// Custom surfaces built from expression strings get theirs by symbolic
/// differentiation; custom surfaces built from callables fall back to finite
/// differences unless analytic functions are supplied.
class SurfaceModel {
 public:
  enum class Kind { Plane, Sphere, Custom };
  using MetricFn = std::function<Mat2(const ChartPoint&)>;
  using ChristoffelFn = std::function<Christoffel(const ChartPoint&)>;
  using CurvatureFn = std::function<double(const ChartPoint&)>;

  static SurfaceModel plane();
  /// Sphere of `radius` in the colatitude/longitude chart.
  static SurfaceModel sphere(double radius);
  /// Throws InvariantViolation when supplied analytic data disagrees with
  /// finite differences at sampled chart points, NonPositiveDefinite for a
  /// bad metric.
  static SurfaceModel custom(std::string name, MetricFn metric, ChartDomain domain,
                             std::optional<ChristoffelFn> christoffel = std::nullopt,
                             std::optional<CurvatureFn> curvature = std::nullopt);
  /// Metric components as expressions in x1, x2.
  static SurfaceModel from_expressions(const std::string& g11, const std::string& g12,
                                       const std::string& g22, ChartDomain domain);

  Kind kind() const { return impl_->kind; }
  const std::string& name() const { return impl_->name; }
  double radius() const { return impl_->radius; }
  const ChartDomain& domain() const { return impl_->domain; }
  bool contains(const ChartPoint& p) const { return impl_->domain.contains(p); }

  /// Unchecked metric evaluation.
  Mat2 metric(const ChartPoint& p) const { return impl_->metric(p); }

  bool has_analytic_christoffel() const { return static_cast<bool>(impl_->christoffel); }
  bool has_analytic_curvature() const { return static_cast<bool>(impl_->curvature); }
  Christoffel analytic_christoffel(const ChartPoint& p) const { return impl_->christoffel(p); }
  double analytic_curvature(const ChartPoint& p) const { return impl_->curvature(p); }

 private:
  struct Impl {
    Kind kind = Kind::Custom;
    std::string name;
    double radius = 0.0;
    ChartDomain domain;
    MetricFn metric;
    ChristoffelFn christoffel;
    CurvatureFn curvature;
  };
  explicit SurfaceModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

enum class DerivativePath { Auto, Analytic, FiniteDifference };

/// Checked metric: OutOfChart, NonPositiveDefinite.
Mat2 metric_at(const SurfaceModel& surface, const ChartPoint& p);

Christoffel christoffel_at(const SurfaceModel& surface, const ChartPoint& p,
                           DerivativePath path = DerivativePath::Auto);

double gauss_curvature(const SurfaceModel& surface, const ChartPoint& p,
                       DerivativePath path = DerivativePath::Auto);

/// R(X,Y)Z = K (g(Y,Z) X - g(X,Z) Y); sectional curvature g(R(X,Y)Y,X) = K
/// for orthonormal X, Y.
TangentVector curvature_operator(const SurfaceModel& surface, const ChartPoint& p,
                                 const TangentVector& x, const TangentVector& y,
                                 const TangentVector& z);

/// Christoffel symbols from a metric jet.
Christoffel christoffel_from_jet(const MetricJet& jet);
/// Gauss curvature from a metric jet, via the Riemann tensor.
double gauss_from_jet(const MetricJet& jet);
/// Metric jet by finite differences (fourth-order central).
MetricJet metric_jet_fd(const SurfaceModel& surface, const ChartPoint& p);

// ---------------------------------------------------------------------------
// Curves on the surface

struct BaseJet {
  Vec2 pos = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
  Vec2 acc = Vec2::Zero();
};

/// A parameterized curve s -> gamma(s) on [s0, s1] with first and second
/// derivatives.
class BaseCurve {
 public:
  using JetFn = std::function<BaseJet(double)>;

  BaseCurve(JetFn jet, double s0, double s1, std::string description = "curve");

  /// Jet from closed-form position; derivatives by finite differences.
  static BaseCurve from_position(std::function<Vec2(double)> position, double s0, double s1,
                                 std::string description = "sampled curve");
  /// Jet from expressions in `s`, differentiated symbolically.
  static BaseCurve from_expressions(const Expression& x1, const Expression& x2, double s0,
                                    double s1);

  BaseJet jet(double s) const;
  ChartPoint point(double s) const { return ChartPoint::from(jet(s).pos); }
  Vec2 velocity(double s) const { return jet(s).vel; }
  double s0() const { return s0_; }
  double s1() const { return s1_; }
  double length() const { return s1_ - s0_; }
  bool in_domain(double s) const;
  const std::string& description() const { return description_; }

 private:
  JetFn jet_;
  double s0_, s1_;
  std::string description_;
};

/// Straight segment p + s v in the plane chart.
BaseCurve plane_line(const Vec2& p, const Vec2& v, double s0, double s1);
/// Circle of `radius` about `center`, traversed counterclockwise at `speed`
/// (clockwise for negative speed).
BaseCurve plane_circle(const Vec2& center, double radius, double speed, double s0, double s1,
                       double phase = 0.0);
/// Circle of constant colatitude on a sphere, longitude phi = lon0 + omega s.
BaseCurve sphere_parallel(double colatitude, double omega, double s0, double s1,
                          double lon0 = 0.0);

using FieldFn = std::function<TangentVector(double)>;

/// Value and parameter derivative of a vector field along a curve.
struct FieldJet {
  TangentVector v = Vec2::Zero();
  TangentVector dv = Vec2::Zero();
};

/// V' + Gamma(gamma', V), with V' by fourth-order differences in s.
TangentVector covariant_deriv_along(const SurfaceModel& surface, const BaseCurve& curve,
                                    const FieldFn& field, double s);
/// Same with an exact parameter derivative.
TangentVector covariant_deriv_along(const SurfaceModel& surface, const BaseCurve& curve,
                                    const FieldJet& field, double s);

/// Solves nabla_{gamma'} V = 0 from s0 to s1 with RK4.
TangentVector parallel_transport(const SurfaceModel& surface, const BaseCurve& curve,
                                 const TangentVector& v0, double s0, double s1);

/// Geodesic through p with initial velocity v on [0, length].
BaseCurve geodesic(const SurfaceModel& surface, const ChartPoint& p, const TangentVector& v,
                   double length);

struct BaseFrenetSample {
  TangentVector t = Vec2::Zero();
  TangentVector n = Vec2::Zero();
  double kappa = 0.0;  ///< signed geodesic curvature, nabla_T T = kappa N
  double speed = 0.0;
};

/// Frenet frame of a surface curve: T = gamma'/r, N = +pi/2 rotation of T.
class BaseFrenet {
 public:
  BaseFrenet(SurfaceModel surface, BaseCurve curve)
      : surface_(std::move(surface)), curve_(std::move(curve)) {}
  BaseFrenetSample at(double s) const;
  const BaseCurve& curve() const { return curve_; }

 private:
  SurfaceModel surface_;
  BaseCurve curve_;
};

/// Throws ZeroSpeed if the curve stalls at any of `samples` check points.
BaseFrenet base_frenet(const SurfaceModel& surface, const BaseCurve& curve, int samples = 64);

/// Frenet sample computed directly from a jet.
BaseFrenetSample frenet_from_jet(const SurfaceModel& surface, const BaseJet& jet);

}  // namespace utb
