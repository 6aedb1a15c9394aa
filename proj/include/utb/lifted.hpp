#pragma once

#include "utb/bundle.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace utb {

/// Threshold below which the Frenet frame of a lifted curve is refused.
inline constexpr double kKappaMin = 1e-7;

/// Unit field X along the base curve together with W = nabla_E X, both in
/// the curve's own parameter.
struct LiftSample {
  TangentVector x = Vec2::Zero();
  TangentVector w = Vec2::Zero();
};
using LiftFieldFn = std::function<LiftSample(double)>;

/// Everything the bundle computations need at one parameter value.
struct LiftState {
  BundlePoint point;
  TangentVector e = Vec2::Zero();  ///< gamma'
  TangentVector w = Vec2::Zero();  ///< nabla_E X
  BaseFrenetSample frenet;         ///< base Frenet data; speed = |gamma'|
  double raw = 0.0;                ///< parameter of the originally built curve
};

enum class LiftKind { Natural, Parallel, ConstantAngle, Prescribed, AngleProfile, Custom };

/// gamma~(s) = (gamma(s), X(s)) in T1M.
class LiftedCurve {
 public:
  using StateFn = std::function<LiftState(double)>;

  LiftedCurve(SurfaceModel surface, BaseCurve base, LiftFieldFn field, std::string description,
              LiftKind kind = LiftKind::Custom);

  LiftState state(double s) const;
  double s0() const { return s0_; }
  double s1() const { return s1_; }
  double length() const { return s1_ - s0_; }
  bool in_domain(double s) const;
  bool arclength() const { return arclength_; }
  LiftKind kind() const { return kind_; }
  const SurfaceModel& surface() const { return surface_; }
  const BaseCurve& base() const { return base_; }
  const std::string& description() const { return description_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// Curve with the same trace whose parameter is s -> state(sigma(s)).
  /// `rate` is d sigma/ds.
  LiftedCurve reparameterized(std::function<std::pair<double, double>(double)> sigma, double s0,
                              double s1, bool arclength) const;

 private:
  LiftedCurve() = default;
  SurfaceModel surface_ = SurfaceModel::plane();
  BaseCurve base_{[](double) { return BaseJet{}; }, 0.0, 1.0};
  StateFn state_;
  double s0_ = 0.0, s1_ = 1.0;
  bool arclength_ = false;
  LiftKind kind_ = LiftKind::Custom;
  std::string description_;
  std::vector<std::string> warnings_;
};

struct LiftSpec {
  LiftKind kind = LiftKind::Parallel;
  double angle = 0.0;  ///< theta0 for parallel and constant_angle
  /// Prescribed field X(s) (normalized, W by differences).
  std::function<TangentVector(double)> field;
  /// Angle profile X = cos(phi) T + sin(phi) N, given phi and phi'.
  std::function<std::pair<double, double>(double)> phi;
};

std::string to_string(LiftKind kind);

/// Errors: ZeroSpeed, NonUnitField.
LiftedCurve make_lift(const SurfaceModel& surface, const BaseCurve& base, const LiftSpec& spec);

/// Local geometry at the curve point.
LocalGeometry local_at(const LiftedCurve& curve, double s);

/// E^h + (nabla_E X)^t.
BundleTangent lifted_tangent(const StructureParams& params, const LiftedCurve& curve, double s);
double g1_speed(const StructureParams& params, const LiftedCurve& curve, double s);

/// Reparameterizes by g1 arclength on [0, L]. Errors: ZeroSpeed.
LiftedCurve reparameterize_arclength(const StructureParams& params, const LiftedCurve& curve);

using BundleFieldFn = std::function<BundleTangent(double)>;

/// nabla1 of `field` along gamma~ (derivative with respect to the curve
/// parameter), per the tensorial/derivation split of the connection.
BundleTangent covariant_along_lifted(const StructureParams& params, const LiftedCurve& curve,
                                     const BundleFieldFn& field, double s);

struct FrenetPoint {
  double s = 0.0;
  BundleTangent T, N, B;
  double kappa = 0.0;
  double tau = 0.0;
  /// |nabla T - kappa N|, |nabla N + kappa T - tau B|, |nabla B + tau N|.
  std::array<double, 3> residual{0.0, 0.0, 0.0};
};

/// g1-unit tangent and nabla1_T T (per unit g1 length) at s.
std::pair<BundleTangent, BundleTangent> unit_tangent_and_acceleration(
    const StructureParams& params, const LiftedCurve& curve, double s);

/// Frenet data at one parameter value. Works in any parameterization;
/// derivatives are taken per unit g1 arclength. Errors: VanishingCurvature.
FrenetPoint frenet_at(const StructureParams& params, const LiftedCurve& curve, double s,
                      bool with_binormal_residual = false);

/// g1 cross product in the orientation of the chart (x1, x2, psi).
BundleTangent g1_cross(const StructureParams& params, const LocalGeometry& loc,
                       const BundleTangent& a, const BundleTangent& b);

struct FrenetApparatus {
  std::vector<FrenetPoint> samples;
  double max_residual = 0.0;
};

/// Frenet data on a uniform grid of `samples` points.
FrenetApparatus frenet_apparatus(const StructureParams& params, const LiftedCurve& curve,
                                 int samples = 400);

/// Sample grid strictly inside the domain (endpoints included).
std::vector<double> sample_grid(double s0, double s1, int samples);

}  // namespace utb
