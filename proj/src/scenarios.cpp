#include "utb/scenarios.hpp"

#include "utb/errors.hpp"
#include "utb/expression.hpp"

#include <fmt/format.h>

#include <cmath>
#include <optional>

namespace utb {

SurfaceSpec plane_spec() {
  SurfaceSpec s;
  s.kind = "plane";
  return s;
}

SurfaceSpec sphere_spec(double radius) {
  SurfaceSpec s;
  s.kind = "sphere";
  s.radius = radius;
  return s;
}

SurfaceModel build_surface(const SurfaceSpec& spec) {
  if (spec.kind == "plane") return SurfaceModel::plane();
  if (spec.kind == "sphere") {
    if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
      fail(ErrorKind::ValidationError, "surface.radius must be positive");
    }
    return SurfaceModel::sphere(spec.radius);
  }
  if (spec.kind == "custom") {
    if (spec.g11.empty() || spec.g22.empty()) {
      fail(ErrorKind::ValidationError, "surface.g11 and surface.g22 are required for a custom surface");
    }
    return SurfaceModel::from_expressions(spec.g11, spec.g12.empty() ? "0" : spec.g12, spec.g22,
                                          spec.domain);
  }
  fail(ErrorKind::ValidationError, "surface.kind must be plane, sphere or custom, got '" + spec.kind + "'");
}

namespace {

bool is_sphere(const SurfaceModel& s) { return s.kind() == SurfaceModel::Kind::Sphere; }

double sphere_omega(const SurfaceModel& surface, double colatitude, double speed) {
  return speed / (surface.radius() * std::sin(colatitude));
}

BaseCurve build_base(const SurfaceModel& surface, const BaseSpec& b) {
  const double s0 = b.s0, s1 = b.s0 + b.length;
  if (!(b.length > 0.0)) fail(ErrorKind::ValidationError, "curve.base.length must be positive");
  if (b.kind == "geodesic") {
    const ChartPoint p{b.point[0], b.point[1]};
    const Vec2 v(b.velocity[0], b.velocity[1]);
    if (surface.kind() == SurfaceModel::Kind::Plane) return plane_line(p.vec(), v, s0, s1);
    if (s0 != 0.0) fail(ErrorKind::ValidationError, "curve.base.s0 must be 0 for an integrated geodesic");
    return geodesic(surface, p, v, b.length);
  }
  if (b.kind == "circle") {
    if (surface.kind() != SurfaceModel::Kind::Plane) {
      fail(ErrorKind::ValidationError, "curve.base.kind circle needs a plane surface");
    }
    return plane_circle(Vec2(b.center[0], b.center[1]), b.radius, b.speed, s0, s1, b.phase);
  }
  if (b.kind == "small_circle" || b.kind == "great_circle") {
    if (!is_sphere(surface)) {
      fail(ErrorKind::ValidationError, "curve.base.kind " + b.kind + " needs a sphere surface");
    }
    const double col = b.kind == "great_circle" ? kPi / 2 : b.colatitude;
    if (!(col > kSpherePoleMargin && col < kPi - kSpherePoleMargin)) {
      fail(ErrorKind::ValidationError, "curve.base.colatitude must lie strictly between the poles");
    }
    return sphere_parallel(col, sphere_omega(surface, col, b.speed), s0, s1, b.lon0);
  }
  if (b.kind == "custom") {
    if (b.x1.empty() || b.x2.empty()) {
      fail(ErrorKind::ValidationError, "curve.base.x1 and curve.base.x2 are required for a custom base");
    }
    return BaseCurve::from_expressions(Expression::parse(b.x1, {"s"}), Expression::parse(b.x2, {"s"}),
                                       s0, s1);
  }
  fail(ErrorKind::ValidationError, "curve.base.kind must be geodesic, circle, small_circle, "
                                   "great_circle or custom, got '" + b.kind + "'");
}

bool geodesic_base(const BaseSpec& b) { return b.kind == "geodesic" || b.kind == "great_circle"; }

LiftedCurve build_lift(const StructureParams& params, const SurfaceModel& surface, const BaseSpec& bs,
                       const LiftCfg& l) {
  const BaseCurve base = build_base(surface, bs);
  LiftSpec spec;
  if (l.kind == "natural") {
    spec.kind = LiftKind::Natural;
  } else if (l.kind == "parallel") {
    spec.kind = LiftKind::Parallel;
    spec.angle = l.angle;
  } else if (l.kind == "constant_angle") {
    spec.kind = LiftKind::ConstantAngle;
    spec.angle = l.angle;
  } else if (l.kind == "legendre") {
    spec.kind = LiftKind::ConstantAngle;
    spec.angle = kPi / 2;
  } else if (l.kind == "slant") {
    return geodesic_base(bs) ? slant_lift_geodesic(params, surface, base, l.phi0, l.c, l.sign)
                             : slant_lift(params, surface, base, l.phi0, l.c, l.sign);
  } else if (l.kind == "prescribed") {
    if (l.x1.empty() || l.x2.empty()) {
      fail(ErrorKind::ValidationError, "curve.lift.x1 and curve.lift.x2 are required for a prescribed lift");
    }
    const Expression f1 = Expression::parse(l.x1, {"s"}), f2 = Expression::parse(l.x2, {"s"});
    spec.kind = LiftKind::Prescribed;
    spec.field = [f1, f2](double s) { return Vec2(f1.eval(s), f2.eval(s)); };
  } else {
    fail(ErrorKind::ValidationError, "curve.lift.kind must be natural, parallel, constant_angle, "
                                     "legendre, slant or prescribed, got '" + l.kind + "'");
  }
  return make_lift(surface, base, spec);
}

}  // namespace

LiftedCurve build_curve(const StructureParams& params, const SurfaceModel& surface,
                        const CurveSpec& spec) {
  if (spec.frenet) {
    const FrenetCfg& d = spec.drive;
    const Expression k = Expression::parse(d.kappa, {"s"}), c = Expression::parse(d.c, {"s"});
    FrenetDrive drive;
    drive.x0 = {d.x0[0], d.x0[1]};
    drive.psi0 = d.psi0;
    drive.theta0 = d.theta0;
    drive.beta0 = d.beta0;
    drive.length = d.length;
    drive.kappa = [k](double s) { return k.eval(s); };
    drive.c = [c](double s) { return c.eval(s); };
    drive.sign = d.sign;
    if (!(d.length > 0.0)) fail(ErrorKind::ValidationError, "curve.frenet.length must be positive");
    return frenet_driven_curve(params, surface, drive);
  }
  return reparameterize_arclength(params, build_lift(params, surface, spec.base, spec.lift));
}

std::string describe(const CurveSpec& spec) {
  if (spec.frenet) {
    return fmt::format("frenet-driven curve kappa~={} c={} theta0={} length={}", spec.drive.kappa,
                       spec.drive.c, spec.drive.theta0, spec.drive.length);
  }
  const BaseSpec& b = spec.base;
  std::string base;
  if (b.kind == "geodesic") {
    base = fmt::format("geodesic from ({}, {}) along ({}, {})", b.point[0], b.point[1], b.velocity[0],
                       b.velocity[1]);
  } else if (b.kind == "circle") {
    base = fmt::format("circle r={} about ({}, {})", b.radius, b.center[0], b.center[1]);
  } else if (b.kind == "small_circle") {
    base = fmt::format("small circle colatitude={}", b.colatitude);
  } else if (b.kind == "great_circle") {
    base = "great circle";
  } else {
    base = fmt::format("curve ({}, {})", b.x1, b.x2);
  }
  const LiftCfg& l = spec.lift;
  std::string lift;
  if (l.kind == "parallel" || l.kind == "constant_angle") {
    lift = fmt::format("{}({:.6g})", l.kind, l.angle);
  } else if (l.kind == "slant") {
    lift = fmt::format("slant(c={}, phi0={}, sign={:+d})", l.c, l.phi0, l.sign);
  } else if (l.kind == "prescribed") {
    lift = fmt::format("prescribed({}, {})", l.x1, l.x2);
  } else {
    lift = l.kind;
  }
  return fmt::format("{} lift of {}", lift, base);
}

namespace {

CurveSpec lift_spec(std::string name, BaseSpec base, LiftCfg lift) {
  CurveSpec c;
  c.name = std::move(name);
  c.base = std::move(base);
  c.lift = std::move(lift);
  return c;
}

BaseSpec small_circle(double colatitude, double length, double speed = 1.0) {
  BaseSpec b;
  b.kind = "small_circle";
  b.colatitude = colatitude;
  b.length = length;
  b.speed = speed;
  return b;
}

BaseSpec great_circle(double length, double speed = 1.0) {
  BaseSpec b;
  b.kind = "great_circle";
  b.length = length;
  b.speed = speed;
  return b;
}

BaseSpec wavy(double center, double amplitude, double length) {
  BaseSpec b;
  b.kind = "custom";
  b.x1 = fmt::format("{}+{}*sin(s)", center, amplitude);
  b.x2 = "s";
  b.length = length;
  return b;
}

BaseSpec plane_circle_base(double radius, double length) {
  BaseSpec b;
  b.kind = "circle";
  b.radius = radius;
  b.length = length;
  return b;
}

BaseSpec plane_line_base(double length) {
  BaseSpec b;
  b.kind = "geodesic";
  b.point = {0.0, 0.0};
  b.velocity = {1.0, 0.0};
  b.length = length;
  return b;
}

LiftCfg lift_of(const std::string& kind, double angle = 0.0) {
  LiftCfg l;
  l.kind = kind;
  l.angle = angle;
  return l;
}

LiftCfg slant(double c, double phi0, int sign) {
  LiftCfg l;
  l.kind = "slant";
  l.c = c;
  l.phi0 = phi0;
  l.sign = sign;
  return l;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  const RawParams p0;
  std::vector<Scenario> out;
  auto add = [&](std::string name, SurfaceSpec surface, CurveSpec curve) {
    curve.name = name;
    out.push_back({std::move(name), p0, std::move(surface), std::move(curve)});
  };
  add("sphere_slant_small_circle", sphere_spec(1.0),
      lift_spec("", small_circle(1.0, 2.0), slant(0.5, 0.3, 1)));
  add("sphere_slant_equator", sphere_spec(1.0), lift_spec("", great_circle(2.0), slant(0.5, 0.3, -1)));
  add("sphere_legendre_wavy", sphere_spec(1.0), lift_spec("", wavy(1.2, 0.3, 2.0), lift_of("legendre")));
  add("sphere_parallel_small_circle", sphere_spec(1.0),
      lift_spec("", small_circle(1.0, 2.0), lift_of("parallel", 0.3)));
  CurveSpec driven;
  driven.frenet = true;
  add("sphere_frenet_driven", sphere_spec(1.0), driven);
  add("sphere2_slant_small_circle", sphere_spec(2.0),
      lift_spec("", small_circle(1.0, 3.0), slant(0.5, 0.3, 1)));
  add("sphere2_parallel_small_circle", sphere_spec(2.0),
      lift_spec("", small_circle(1.0, 3.0, 0.5), lift_of("parallel", 0.3)));
  add("plane_line_parallel", plane_spec(), lift_spec("", plane_line_base(2.0), lift_of("parallel", kPi / 3)));
  add("plane_line_slant", plane_spec(), lift_spec("", plane_line_base(4.0), slant(0.5, 0.2, 1)));
  add("plane_circle_constant_angle", plane_spec(),
      lift_spec("", plane_circle_base(1.0, 3.0), lift_of("constant_angle", 0.3)));
  add("plane_circle_slant", plane_spec(), lift_spec("", plane_circle_base(1.0, 3.0), slant(0.5, 0.3, 1)));
  add("plane_circle_natural", plane_spec(), lift_spec("", plane_circle_base(1.0, 3.0), lift_of("natural")));
  return out;
}

std::vector<CurveSpec> prop31_family(const StructureParams& params) {
  (void)params;
  return {
      lift_spec("slant small circle 0.6", small_circle(0.6, 2.0), slant(0.5, 0.3, 1)),
      lift_spec("slant small circle 1.0", small_circle(1.0, 2.0), slant(0.5, 0.3, 1)),
      lift_spec("slant small circle c=0.3", small_circle(1.0, 2.0), slant(0.3, 0.2, 1)),
      lift_spec("slant great circle", great_circle(2.0), slant(0.5, 0.3, -1)),
      lift_spec("slant wavy", wavy(1.2, 0.3, 2.0), slant(0.5, 0.3, 1)),
      lift_spec("legendre wavy", wavy(1.2, 0.3, 2.0), lift_of("legendre")),
      lift_spec("legendre wavy 2", wavy(1.0, 0.2, 2.0), lift_of("legendre")),
      lift_spec("natural wavy", wavy(1.2, 0.3, 2.0), lift_of("natural")),
  };
}

CurveSpec prop32_curve() {
  CurveSpec c;
  c.name = "frenet-driven c=0.3";
  c.frenet = true;
  return c;
}

CurveSpec prop32_control() {
  return lift_spec("parallel small circle", small_circle(1.0, 2.0), lift_of("parallel", 0.3));
}

namespace {

std::optional<double> tau_for_angle(const StructureParams& params, const SurfaceModel& surface,
                                    const BaseSpec& base, double angle) {
  try {
    BaseSpec b = base;
    b.length = 0.5;
    const LiftedCurve curve = build_curve(params, surface, lift_spec("", b, lift_of("constant_angle", angle)));
    return frenet_at(params, curve, 0.5 * (curve.s0() + curve.s1())).tau;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Root of tau(angle) = target on a bracket, by regula falsi (Illinois).
std::optional<double> solve_angle(const StructureParams& params, const SurfaceModel& surface,
                                  const BaseSpec& base, double target) {
  constexpr int kScan = 48;
  std::optional<double> prev_f;
  double prev_a = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double a = -kPi + (i + 0.5) * 2.0 * kPi / kScan;
    const std::optional<double> t = tau_for_angle(params, surface, base, a);
    if (!t) {
      prev_f.reset();
      continue;
    }
    const double f = *t - target;
    if (prev_f && (*prev_f) * f <= 0.0) {
      double a0 = prev_a, a1 = a, f0 = *prev_f, f1 = f, m = a;
      int side = 0;
      for (int it = 0; it < 100; ++it) {
        m = (a0 * f1 - a1 * f0) / (f1 - f0);
        const std::optional<double> tm = tau_for_angle(params, surface, base, m);
        if (!tm) return std::nullopt;
        const double fm = *tm - target;
        if (fm * f1 > 0.0) {
          a1 = m;
          f1 = fm;
          if (side == -1) f0 *= 0.5;
          side = -1;
        } else if (fm * f0 > 0.0) {
          a0 = m;
          f0 = fm;
          if (side == 1) f1 *= 0.5;
          side = 1;
        } else {
          break;
        }
        if (std::abs(a1 - a0) < 1e-13 || std::abs(fm) < 1e-14) break;
      }
      return m;
    }
    prev_f = f;
    prev_a = a;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CurveSpec> prop33_family(const StructureParams& params, const SurfaceModel& surface) {
  if (!is_sphere(surface)) fail(ErrorKind::ValidationError, "the torsion family needs a sphere");
  const double K = 1.0 / (surface.radius() * surface.radius());
  const double len = 3.0 * surface.radius();
  const std::vector<std::pair<std::string, BaseSpec>> bases = {
      {"great circle", great_circle(len)},
      {"small circle 0.5", small_circle(0.5, len)},
      {"small circle 1.0", small_circle(1.0, len)},
  };
  std::vector<CurveSpec> out;
  for (const auto& [name, base] : bases) {
    for (const double target : {K, -K}) {
      if (const std::optional<double> a = solve_angle(params, surface, base, target)) {
        out.push_back(lift_spec(fmt::format("{} tau~={:+.4g}", name, target), base,
                                lift_of("constant_angle", *a)));
      }
    }
  }
  return out;
}

std::vector<CurveSpec> prop34_family(const SurfaceSpec& surface) {
  if (surface.kind == "plane") {
    return {
        lift_spec("line parallel(pi/3)", plane_line_base(2.0), lift_of("parallel", kPi / 3)),
        lift_spec("line slant c=0.5", plane_line_base(4.0), slant(0.5, 0.2, 1)),
        lift_spec("line slant c=0.8", plane_line_base(4.0), slant(0.8, 0.2, 1)),
        lift_spec("circle constant_angle(0.3)", plane_circle_base(1.0, 3.0), lift_of("constant_angle", 0.3)),
        lift_spec("circle constant_angle(1.2)", plane_circle_base(1.0, 3.0), lift_of("constant_angle", 1.2)),
        lift_spec("circle slant c=0.5", plane_circle_base(1.0, 3.0), slant(0.5, 0.3, 1)),
        lift_spec("circle natural", plane_circle_base(1.0, 3.0), lift_of("natural")),
    };
  }
  const double len = 1.5 * surface.radius;
  return {
      lift_spec("great circle slant c=0.5", great_circle(2.0 * len), slant(0.5, 0.2, 1)),
      lift_spec("small circle slant c=0.5", small_circle(1.0, len), slant(0.5, 0.3, 1)),
      lift_spec("small circle constant_angle(0.7)", small_circle(1.0, len), lift_of("constant_angle", 0.7)),
      lift_spec("small circle natural", small_circle(1.0, len), lift_of("natural")),
  };
}

CurveSpec prop36_curve(const StructureParams& params) {
  (void)params;
  return lift_spec("parallel small circle", small_circle(1.0, 3.0), lift_of("parallel", 1.5));
}

}  // namespace utb
