#include "utb/bundle.hpp"

#include "utb/errors.hpp"
#include "utb/finite_difference.hpp"

#include <cmath>
#include <sstream>

namespace utb {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

StructureParams validate_params(const RawParams& raw) {
  const double vals[] = {raw.c1, raw.c2, raw.d1, raw.lambda, raw.a1, raw.b1};
  for (double v : vals) {
    if (!std::isfinite(v)) fail(ErrorKind::ValidationError, "structure constants must be finite");
  }
  if (!(raw.c1 > 0.0)) fail(ErrorKind::PositivityViolation, "c1 > 0 violated (c1=" + num(raw.c1) + ")");
  if (!(raw.c2 > 0.0)) fail(ErrorKind::PositivityViolation, "c2 > 0 violated (c2=" + num(raw.c2) + ")");
  if (!(raw.c1 + raw.d1 > 0.0)) {
    fail(ErrorKind::PositivityViolation, "c1 + d1 > 0 violated (c1+d1=" + num(raw.c1 + raw.d1) + ")");
  }
  if (raw.lambda == 0.0) fail(ErrorKind::ZeroDenominator, "lambda must be nonzero");
  if (raw.a1 == 0.0) fail(ErrorKind::ZeroDenominator, "a1 must be nonzero");
  const double denom = raw.a1 + 2.0 * kUnitBundleT * raw.b1;
  if (denom == 0.0) fail(ErrorKind::ZeroDenominator, "a1 + 2t b1 must be nonzero");

  StructureParams p;
  p.c1 = raw.c1;
  p.c2 = raw.c2;
  p.d1 = raw.d1;
  p.lambda = raw.lambda;
  p.a1 = raw.a1;
  p.a2 = 1.0 / raw.a1;
  p.b1 = raw.b1;
  p.b2 = -raw.b1 / (raw.a1 * denom);
  p.alpha = (raw.c1 + raw.d1) / (4.0 * raw.lambda * raw.lambda);
  const double lhs = raw.c1, rhs = raw.a1 * raw.a1 * raw.c2;
  p.phi_compatible = std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs);
  if (!p.phi_compatible) {
    p.warnings.push_back("c1 != a1^2 c2: phi1 is not compatible with g1 for these constants");
  }
  return p;
}

StructureParams canonical_params() { return validate_params(RawParams{}); }

LocalGeometry local_geometry(const SurfaceModel& surface, const BundlePoint& point) {
  LocalGeometry loc;
  loc.point = point;
  loc.g = metric_at(surface, point.x);
  const double n2 = inner(loc.g, point.u, point.u);
  if (!(std::abs(n2 - 1.0) <= 1e-10)) {
    fail(ErrorKind::InvariantViolation, "bundle point has g(u,u) = " + num(n2));
  }
  loc.gamma = christoffel_at(surface, point.x);
  loc.K = gauss_curvature(surface, point.x);
  return loc;
}

void check_tangent(const LocalGeometry& loc, const BundleTangent& a) {
  const double r = loc.ip(a.t, loc.u());
  if (!(std::abs(r) <= 1e-10 * std::max(1.0, norm(loc.g, a.t)))) {
    fail(ErrorKind::ConstraintViolation, "tangential part has g(t,u) = " + num(r));
  }
}

double g1(const StructureParams& p, const LocalGeometry& loc, const BundleTangent& a,
          const BundleTangent& b) {
  check_tangent(loc, a);
  check_tangent(loc, b);
  const Vec2& u = loc.u();
  return p.alpha * (p.c1 * loc.ip(a.h, b.h) + p.d1 * loc.ip(a.h, u) * loc.ip(b.h, u) +
                    p.c2 * loc.ip(a.t, b.t));
}

double g1(const StructureParams& params, const SurfaceModel& surface, const BundlePoint& point,
          const BundleTangent& a, const BundleTangent& b) {
  return g1(params, local_geometry(surface, point), a, b);
}

double g1_norm(const StructureParams& params, const LocalGeometry& loc, const BundleTangent& a) {
  return std::sqrt(g1(params, loc, a, a));
}

double ContactTensors::eta(const BundleTangent& a) const {
  return 2.0 * params.alpha * params.lambda * loc.ip(a.h, loc.u());
}

BundleTangent ContactTensors::phi(const BundleTangent& a) const {
  const Vec2& u = loc.u();
  BundleTangent r;
  r.h = -params.a2 * a.t + params.a2 * loc.ip(a.t, u) * u;
  r.t = params.a1 * loc.proj(a.h);
  return r;
}

ContactTensors contact_tensors(const StructureParams& params, const LocalGeometry& loc) {
  ContactTensors c{params, loc, {}};
  c.xi.h = loc.u() / (2.0 * params.lambda * params.alpha);
  return c;
}

ContactTensors contact_tensors(const StructureParams& params, const SurfaceModel& surface,
                               const BundlePoint& point) {
  return contact_tensors(params, local_geometry(surface, point));
}

NablaCase parse_nabla_case(const std::string& name) {
  if (name == "hh") return NablaCase::hh;
  if (name == "ht") return NablaCase::ht;
  if (name == "th") return NablaCase::th;
  if (name == "tt") return NablaCase::tt;
  fail(ErrorKind::CaseMismatch, "unknown connection case '" + name + "'");
}

std::string to_string(NablaCase c) {
  switch (c) {
    case NablaCase::hh: return "hh";
    case NablaCase::ht: return "ht";
    case NablaCase::th: return "th";
    case NablaCase::tt: return "tt";
  }
  return "?";
}

BundleTangent nabla1(const StructureParams& p, const LocalGeometry& loc, NablaCase c,
                     const TangentVector& x, const TangentVector& y,
                     const TangentVector& derivative) {
  const Vec2& u = loc.u();
  const double c1 = p.c1, c2 = p.c2, d1 = p.d1;
  const double xu = loc.ip(x, u), yu = loc.ip(y, u);
  BundleTangent r;
  switch (c) {
    case NablaCase::hh:
      r.h = derivative;
      r.t = loc.proj(-0.5 * loc.curv(x, y, u) - d1 / (2.0 * c2) * (xu * y + yu * x));
      break;
    case NablaCase::ht:
      r.t = loc.proj(derivative);
      r.h = -c2 / (2.0 * c1) * loc.curv(y, u, x) + d1 / (2.0 * c1) * xu * y +
            d1 / (2.0 * (c1 + d1)) * loc.ip(x, y) * u -
            d1 * (2.0 * c1 + d1) / (2.0 * c1 * (c1 + d1)) * xu * yu * u -
            c2 * d1 / (2.0 * c1 * (c1 + d1)) * loc.ip(y, loc.curv(x, u, u)) * u;
      break;
    case NablaCase::th:
    case NablaCase::tt:
      if (derivative.cwiseAbs().maxCoeff() != 0.0) {
        fail(ErrorKind::CaseMismatch, "case " + to_string(c) + " takes no derivative term");
      }
      if (c == NablaCase::th) {
        r.h = -c2 / (2.0 * c1) * loc.curv(x, u, y) + d1 / (2.0 * c1) * yu * x +
              d1 / (2.0 * (c1 + d1)) * loc.ip(x, y) * u -
              d1 * (2.0 * c1 + d1) / (2.0 * c1 * (c1 + d1)) * xu * yu * u -
              c2 * d1 / (2.0 * c1 * (c1 + d1)) * loc.ip(x, loc.curv(y, u, u)) * u;
      } else {
        r.t = -yu * loc.proj(x);
      }
      break;
  }
  return r;
}

BundleTangent nabla1(const StructureParams& params, const SurfaceModel& surface,
                     const BundlePoint& point, NablaCase c, const TangentVector& x,
                     const TangentVector& y, const TangentVector& derivative) {
  return nabla1(params, local_geometry(surface, point), c, x, y, derivative);
}

BundleTangent nabla1_along(const StructureParams& params, const LocalGeometry& loc,
                           const TangentVector& e, const TangentVector& w,
                           const BundleTangent& field, const TangentVector& nabla_e_h,
                           const TangentVector& nabla_e_t) {
  const Vec2 zero = Vec2::Zero();
  return nabla1(params, loc, NablaCase::hh, e, field.h, nabla_e_h) +
         nabla1(params, loc, NablaCase::th, w, field.h, zero) +
         nabla1(params, loc, NablaCase::ht, e, field.t, nabla_e_t) +
         nabla1(params, loc, NablaCase::tt, w, field.t, zero);
}

// ---------------------------------------------------------------------------

namespace {

std::pair<Vec2, Vec2> gram_schmidt(const Mat2& g) {
  const Vec2 e1 = Vec2(1.0, 0.0) / std::sqrt(g(0, 0));
  Vec2 e2 = Vec2(0.0, 1.0) - inner(g, Vec2(0.0, 1.0), e1) * e1;
  e2 /= norm(g, e2);
  return {e1, e2};
}

}  // namespace

ChartFrame chart_frame(const SurfaceModel& surface, const ChartPoint& p) {
  const Mat2 g = metric_at(surface, p);
  const Christoffel gam = christoffel_at(surface, p);
  ChartFrame f;
  std::tie(f.e1, f.e2) = gram_schmidt(g);
  auto e1_at = [&](double a, double b) { return gram_schmidt(surface.metric({a, b})).first; };
  const Vec2 d0 = fd::central([&](double t) { return e1_at(t, p.x2); }, p.x1, fd::spatial_step(p.x1));
  const Vec2 d1 = fd::central([&](double t) { return e1_at(p.x1, t); }, p.x2, fd::spatial_step(p.x2));
  f.omega[0] = inner(g, d0 + gam.contract(Vec2(1.0, 0.0), f.e1), f.e2);
  f.omega[1] = inner(g, d1 + gam.contract(Vec2(0.0, 1.0), f.e1), f.e2);
  return f;
}

BundlePoint chart_bundle_point(const SurfaceModel& surface, const Vec3& y) {
  const ChartPoint x{y[0], y[1]};
  const auto [e1, e2] = gram_schmidt(metric_at(surface, x));
  return {x, std::cos(y[2]) * e1 + std::sin(y[2]) * e2};
}

BundleTangent chart_to_bundle(const SurfaceModel& surface, const Vec3& y, const Vec3& v) {
  const ChartPoint x{y[0], y[1]};
  const ChartFrame f = chart_frame(surface, x);
  const Vec2 ju = -std::sin(y[2]) * f.e1 + std::cos(y[2]) * f.e2;
  return {Vec2(v[0], v[1]), (v[0] * f.omega[0] + v[1] * f.omega[1] + v[2]) * ju};
}

Vec3 bundle_to_chart(const SurfaceModel& surface, const Vec3& y, const BundleTangent& a) {
  const ChartPoint x{y[0], y[1]};
  const Mat2 g = metric_at(surface, x);
  const ChartFrame f = chart_frame(surface, x);
  const Vec2 ju = -std::sin(y[2]) * f.e1 + std::cos(y[2]) * f.e2;
  const double psi = inner(g, a.t, ju) - a.h[0] * f.omega[0] - a.h[1] * f.omega[1];
  return {a.h[0], a.h[1], psi};
}

Mat3 chart_metric(const StructureParams& params, const SurfaceModel& surface, const Vec3& y) {
  const LocalGeometry loc = local_geometry(surface, chart_bundle_point(surface, y));
  std::array<BundleTangent, 3> basis;
  for (int a = 0; a < 3; ++a) basis[a] = chart_to_bundle(surface, y, Vec3::Unit(a));
  Mat3 G;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) G(a, b) = g1(params, loc, basis[a], basis[b]);
  }
  return G;
}

Christoffel3 chart_connection_oracle(const StructureParams& params, const SurfaceModel& surface,
                                     const Vec3& y) {
  const Mat3 G = chart_metric(params, surface, y);
  const Mat3 Ginv = G.inverse();
  std::array<Mat3, 3> dG;
  for (int c = 0; c < 3; ++c) {
    // Coarser step: the metric itself contains a first difference.
    dG[c] = fd::central(
        [&](double t) {
          Vec3 z = y;
          z[c] = t;
          return chart_metric(params, surface, z);
        },
        y[c], fd::spatial_step(y[c], 1e-3));
  }
  Christoffel3 gam;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int d = 0; d < 3; ++d) v += 0.5 * Ginv(a, d) * (dG[b](d, c) + dG[c](d, b) - dG[d](b, c));
        gam[a](b, c) = v;
      }
    }
  }
  return gam;
}

Vec3 chart_line_derivative(const StructureParams& params, const SurfaceModel& surface,
                           const Vec3& y0, const Vec3& dy, const Vec3& v0, const Vec3& v1,
                           bool oracle) {
  if (oracle) {
    const Christoffel3 gam = chart_connection_oracle(params, surface, y0);
    Vec3 r = v1;
    for (int a = 0; a < 3; ++a) r[a] += dy.dot(gam[a] * v0);
    return r;
  }
  const LocalGeometry loc = local_geometry(surface, chart_bundle_point(surface, y0));
  const BundleTangent tdot = chart_to_bundle(surface, y0, dy);
  const BundleTangent field = chart_to_bundle(surface, y0, v0);
  const Vec2 e = tdot.h, w = tdot.t;
  const Vec2 nabla_h = Vec2(v1[0], v1[1]) + loc.gamma.contract(e, field.h);
  auto t_at = [&](double s) { return chart_to_bundle(surface, y0 + s * dy, v0 + s * v1).t; };
  const Vec2 dt = fd::central(t_at, 0.0, fd::curve_step(0.0));
  const Vec2 nabla_t = dt + loc.gamma.contract(e, field.t);
  return bundle_to_chart(surface, y0, nabla1_along(params, loc, e, w, field, nabla_h, nabla_t));
}

SasakianReport sasakian_check(const StructureParams& params, const SurfaceModel& surface) {
  std::vector<ChartPoint> pts;
  const ChartDomain& d = surface.domain();
  auto lo_hi = [](double lo, double hi) {
    const double a = std::isfinite(lo) ? lo : -1.0;
    const double b = std::isfinite(hi) ? hi : 1.0;
    const double m = 0.1 * (b - a);
    return std::pair{a + m, b - m};
  };
  const auto [a1, b1] = lo_hi(d.lo1, d.hi1);
  const auto [a2, b2] = lo_hi(d.lo2, d.hi2);
  double kmin = std::numeric_limits<double>::infinity(), kmax = -kmin;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double k = gauss_curvature(surface, {a1 + (b1 - a1) * i / 4.0, a2 + (b2 - a2) * j / 4.0});
      kmin = std::min(kmin, k);
      kmax = std::max(kmax, k);
    }
  }
  if (!(kmax - kmin <= 1e-9)) {
    fail(ErrorKind::NonConstantCurvature,
         "curvature varies over the chart (range " + num(kmax - kmin) + ")");
  }
  SasakianReport r;
  r.K = 0.5 * (kmin + kmax);
  r.a1_squared = params.a1 * params.a1;
  r.is_sasakian = std::abs(r.K - r.a1_squared) < 1e-9;
  return r;
}

}  // namespace utb
