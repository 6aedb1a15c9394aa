#pragma once

#include "utb/lift_builders.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace utb {

struct SurfaceSpec {
  std::string kind = "sphere";  ///< plane, sphere, custom
  double radius = 1.0;
  std::string g11, g12, g22;    ///< custom metric expressions in x1, x2
  ChartDomain domain{-10.0, 10.0, -10.0, 10.0};
};

struct BaseSpec {
  std::string kind = "small_circle";  ///< geodesic, circle, small_circle, great_circle, custom
  std::array<double, 2> point{0.0, 0.0};
  std::array<double, 2> velocity{1.0, 0.0};
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  double speed = 1.0;
  double colatitude = 1.0;
  double lon0 = 0.0;
  double phase = 0.0;
  double s0 = 0.0;
  double length = 2.0;
  std::string x1, x2;  ///< custom base, expressions in s
};

struct LiftCfg {
  std::string kind = "parallel";  ///< natural, parallel, constant_angle, legendre, slant, prescribed
  double angle = 0.0;
  double phi0 = 0.3;
  double c = 0.5;
  int sign = 1;
  std::string x1, x2;  ///< prescribed field, expressions in s
};

struct FrenetCfg {
  std::array<double, 2> x0{1.2, 0.1};
  double psi0 = 0.0;
  double theta0 = kPi / 2;
  double beta0 = 0.3;
  double length = 1.0;
  std::string kappa = "1";  ///< expression in s
  std::string c = "0.3";    ///< expression in s
  int sign = 1;
};

struct CurveSpec {
  std::string name;
  bool frenet = false;  ///< frenet-driven curve instead of base + lift
  BaseSpec base;
  LiftCfg lift;
  FrenetCfg drive;
};

/// Errors: ValidationError, ParseError, NonPositiveDefinite.
SurfaceModel build_surface(const SurfaceSpec& spec);

/// Builds the curve and reparameterizes it by g1 arclength.
LiftedCurve build_curve(const StructureParams& params, const SurfaceModel& surface,
                        const CurveSpec& spec);

std::string describe(const CurveSpec& spec);

struct Scenario {
  std::string name;
  RawParams params;
  SurfaceSpec surface;
  CurveSpec curve;
};

/// Classification scenarios at the canonical constants.
std::vector<Scenario> builtin_scenarios();

/// Legendre and slant lifts on the unit sphere.
std::vector<CurveSpec> prop31_family(const StructureParams& params);
/// Non-slant curve with constant g1(N~, xi1) on the unit sphere.
CurveSpec prop32_curve();
/// Non-slant curve whose g1(N~, xi1) is not constant.
CurveSpec prop32_control();
/// Constant-angle lifts of circles with the lift angle tuned so that
/// tau~ = +K or -K, on a sphere.
std::vector<CurveSpec> prop33_family(const StructureParams& params, const SurfaceModel& surface);
/// Slant lifts on the plane or a sphere.
std::vector<CurveSpec> prop34_family(const SurfaceSpec& surface);
/// Parallel lift of a small circle traversed at speed 2 lambda / (c1 + d1).
CurveSpec prop36_curve(const StructureParams& params);

SurfaceSpec plane_spec();
SurfaceSpec sphere_spec(double radius);

}  // namespace utb
