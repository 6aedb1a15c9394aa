#pragma once

#include "utb/lifted.hpp"

#include <functional>

namespace utb {

/// Slant lift X = cos(phi) T + sin(phi) N along `base` with
/// g1(T~, xi1) = c for the g1-unit tangent. phi solves
///   phi' = -r kappa + sign r sqrt((cos^2 phi (1/(alpha k^2) - d1) - c1) / c2),
/// k = 2 lambda c / (c1 + d1), starting from phi0.
/// Errors: NegativeRadicand (no real solution at phi0 or along the way).
LiftedCurve slant_lift(const StructureParams& params, const SurfaceModel& surface,
                       const BaseCurve& base, double phi0, double c, int sign);

/// Slant lift along a constant-speed geodesic, integrated in the second-order
/// form phi'' = -(r^2 A / (2 c2)) sin(2 phi), A = 1/(alpha k^2) - d1, which
/// continues through the turning points where the radicand vanishes.
/// Errors: ValidationError (base not a constant-speed geodesic),
/// NegativeRadicand.
LiftedCurve slant_lift_geodesic(const StructureParams& params, const SurfaceModel& surface,
                                const BaseCurve& base, double phi0, double c, int sign);

struct FrenetDrive {
  ChartPoint x0;
  double psi0 = 0.0;    ///< direction of X0 relative to the Gram-Schmidt frame
  double theta0 = 1.2;  ///< angle between T~(0) and xi1
  double beta0 = 0.0;   ///< direction of T~(0) in the plane orthogonal to xi1
  double length = 1.0;
  std::function<double(double)> kappa;  ///< prescribed kappa~(s)
  std::function<double(double)> c;      ///< prescribed g1(N~, xi1)(s)
  int sign = 1;                         ///< side of N~ within the normal plane
};

/// Curve in T1M, parameterized by g1 arclength, solving nabla1_T T = kappa N
/// with the xi1 component of N prescribed. Errors: DomainViolation when the
/// prescribed component is not attainable (|c| > sin theta), ZeroSpeed,
/// IntegrationFailure.
LiftedCurve frenet_driven_curve(const StructureParams& params, const SurfaceModel& surface,
                                const FrenetDrive& drive);

}  // namespace utb
