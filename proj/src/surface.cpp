#include "utb/surface.hpp"

#include "utb/errors.hpp"
#include "utb/finite_difference.hpp"
#include "utb/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace utb {

namespace {

std::string point_str(const ChartPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(" << p.x1 << ", " << p.x2 << ")";
  return os.str();
}

void require_in_chart(const SurfaceModel& surface, const ChartPoint& p) {
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2) || !surface.contains(p)) {
    fail(ErrorKind::OutOfChart, "point " + point_str(p) + " outside the chart of " + surface.name());
  }
}

void require_metric_ok(const Mat2& g, const ChartPoint& p) {
  if (!g.allFinite() || std::abs(g(0, 1) - g(1, 0)) > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()) ||
      !(g(0, 0) > 0.0) || !(g.determinant() > 0.0)) {
    fail(ErrorKind::NonPositiveDefinite, "metric not symmetric positive definite at " + point_str(p));
  }
}

// Sample points for validating custom surfaces: a 5x5 grid inside the domain,
// clipped to [-1, 1]^2 for unbounded directions.
std::vector<ChartPoint> validation_grid(const ChartDomain& d) {
  auto span = [](double lo, double hi) {
    const double a = std::isfinite(lo) ? lo : std::min(-1.0, hi - 2.0);
    const double b = std::isfinite(hi) ? hi : std::max(1.0, lo + 2.0);
    const double m = 0.1 * (b - a);
    return std::pair{a + m, b - m};
  };
  const auto [a1, b1] = span(d.lo1, d.hi1);
  const auto [a2, b2] = span(d.lo2, d.hi2);
  std::vector<ChartPoint> pts;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      pts.push_back({a1 + (b1 - a1) * i / 4.0, a2 + (b2 - a2) * j / 4.0});
    }
  }
  return pts;
}

}  // namespace

SurfaceModel SurfaceModel::plane() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Plane;
  impl->name = "plane";
  impl->metric = [](const ChartPoint&) { return Mat2::Identity().eval(); };
  impl->christoffel = [](const ChartPoint&) { return Christoffel{}; };
  impl->curvature = [](const ChartPoint&) { return 0.0; };
  return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::sphere(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorKind::ValidationError, "sphere radius must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Sphere;
  impl->name = "sphere";
  impl->radius = radius;
  impl->domain = ChartDomain{kSpherePoleMargin, kPi - kSpherePoleMargin,
                             -std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
  const double r2 = radius * radius;
  impl->metric = [r2](const ChartPoint& p) {
    const double s = std::sin(p.x1);
    Mat2 g;
    g << r2, 0.0, 0.0, r2 * s * s;
    return g;
  };
  impl->christoffel = [](const ChartPoint& p) {
    const double s = std::sin(p.x1), c = std::cos(p.x1);
    Christoffel gam;
    gam.up[0](1, 1) = -s * c;
    gam.up[1](0, 1) = c / s;
    gam.up[1](1, 0) = c / s;
    return gam;
  };
  impl->curvature = [r2](const ChartPoint&) { return 1.0 / r2; };
  return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::custom(std::string name, MetricFn metric, ChartDomain domain,
                                  std::optional<ChristoffelFn> christoffel,
                                  std::optional<CurvatureFn> curvature) {
  if (!metric) fail(ErrorKind::ValidationError, "custom surface needs a metric");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Custom;
  impl->name = std::move(name);
  impl->domain = domain;
  impl->metric = std::move(metric);
  if (christoffel) impl->christoffel = std::move(*christoffel);
  if (curvature) impl->curvature = std::move(*curvature);
  SurfaceModel model(std::move(impl));

  for (const ChartPoint& p : validation_grid(domain)) {
    require_metric_ok(model.metric(p), p);
    if (model.has_analytic_christoffel()) {
      const Christoffel a = model.analytic_christoffel(p);
      const Christoffel f = christoffel_at(model, p, DerivativePath::FiniteDifference);
      for (int k = 0; k < 2; ++k) {
        const double err = (a.up[k] - f.up[k]).cwiseAbs().maxCoeff();
        if (!(err <= 1e-6 * std::max(1.0, f.up[k].cwiseAbs().maxCoeff()))) {
          fail(ErrorKind::InvariantViolation,
               "analytic Christoffel symbols disagree with differences at " + point_str(p));
        }
      }
    }
    if (model.has_analytic_curvature()) {
      const double a = model.analytic_curvature(p);
      const double f = gauss_curvature(model, p, DerivativePath::FiniteDifference);
      if (!(std::abs(a - f) <= 1e-5 * std::max(1.0, std::abs(f)))) {
        fail(ErrorKind::InvariantViolation,
             "analytic curvature disagrees with differences at " + point_str(p));
      }
    }
  }
  return model;
}

SurfaceModel SurfaceModel::from_expressions(const std::string& g11, const std::string& g12,
                                            const std::string& g22, ChartDomain domain) {
  const std::vector<std::string> vars{"x1", "x2"};
  struct Component {
    Expression e;
    std::array<Expression, 2> d;
    std::array<std::array<Expression, 2>, 2> dd;
  };
  auto build = [&](const std::string& text) {
    Expression e = Expression::parse(text, vars);
    Expression d0 = e.derivative(0), d1 = e.derivative(1);
    return Component{e, {d0, d1}, {{{d0.derivative(0), d0.derivative(1)}, {d1.derivative(0), d1.derivative(1)}}}};
  };
  auto comps = std::make_shared<const std::array<Component, 3>>(
      std::array<Component, 3>{build(g11), build(g12), build(g22)});

  auto assemble = [](const std::array<Component, 3>& c, auto pick) {
    Mat2 m;
    m << pick(c[0]), pick(c[1]), pick(c[1]), pick(c[2]);
    return m;
  };
  auto jet = [comps, assemble](const ChartPoint& p) {
    MetricJet j;
    j.g = assemble(*comps, [&](const Component& c) { return c.e.eval(p.x1, p.x2); });
    for (int l = 0; l < 2; ++l) {
      j.dg[l] = assemble(*comps, [&](const Component& c) { return c.d[l].eval(p.x1, p.x2); });
      for (int m = 0; m < 2; ++m) {
        j.ddg[l][m] = assemble(*comps, [&](const Component& c) { return c.dd[l][m].eval(p.x1, p.x2); });
      }
    }
    return j;
  };
  MetricFn metric = [comps, assemble](const ChartPoint& p) {
    return assemble(*comps, [&](const Component& c) { return c.e.eval(p.x1, p.x2); });
  };
  ChristoffelFn christoffel = [jet](const ChartPoint& p) { return christoffel_from_jet(jet(p)); };
  CurvatureFn curvature = [jet](const ChartPoint& p) { return gauss_from_jet(jet(p)); };
  const std::string name = "custom(g11=" + g11 + ", g12=" + g12 + ", g22=" + g22 + ")";
  return custom(name, std::move(metric), domain, std::move(christoffel), std::move(curvature));
}

Mat2 metric_at(const SurfaceModel& surface, const ChartPoint& p) {
  require_in_chart(surface, p);
  const Mat2 g = surface.metric(p);
  require_metric_ok(g, p);
  return g;
}

Christoffel christoffel_from_jet(const MetricJet& jet) {
  const Mat2 ginv = jet.g.inverse();
  Christoffel gam;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double v = 0.0;
        for (int l = 0; l < 2; ++l) {
          v += 0.5 * ginv(k, l) * (jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j));
        }
        gam.up[k](i, j) = v;
      }
    }
  }
  return gam;
}

double gauss_from_jet(const MetricJet& jet) {
  const Mat2 ginv = jet.g.inverse();
  const Christoffel gam = christoffel_from_jet(jet);
  // dgam[m].up[k](i,j) = d_m Gamma^k_ij
  std::array<Christoffel, 2> dgam;
  for (int m = 0; m < 2; ++m) {
    const Mat2 dginv = -ginv * jet.dg[m] * ginv;
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double v = 0.0;
          for (int l = 0; l < 2; ++l) {
            const double bracket = jet.dg[i](l, j) + jet.dg[j](l, i) - jet.dg[l](i, j);
            const double dbracket = jet.ddg[m][i](l, j) + jet.ddg[m][j](l, i) - jet.ddg[m][l](i, j);
            v += 0.5 * (dginv(k, l) * bracket + ginv(k, l) * dbracket);
          }
          dgam[m].up[k](i, j) = v;
        }
      }
    }
  }
  // R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
  // R(d1, d2) d2 = R^a_{2 1 2} d_a
  const int b = 1, c = 0, d = 1;
  Vec2 r;
  for (int a = 0; a < 2; ++a) {
    double v = dgam[c].up[a](d, b) - dgam[d].up[a](c, b);
    for (int e = 0; e < 2; ++e) {
      v += gam.up[a](c, e) * gam.up[e](d, b) - gam.up[a](d, e) * gam.up[e](c, b);
    }
    r[a] = v;
  }
  const Vec2 e1(1.0, 0.0);
  return inner(jet.g, r, e1) / jet.g.determinant();
}

MetricJet metric_jet_fd(const SurfaceModel& surface, const ChartPoint& p) {
  auto g_at = [&](double x1, double x2) { return surface.metric({x1, x2}); };
  MetricJet jet;
  jet.g = g_at(p.x1, p.x2);
  const double h1 = fd::spatial_step(p.x1), h2 = fd::spatial_step(p.x2);
  jet.dg[0] = fd::central([&](double t) { return g_at(t, p.x2); }, p.x1, h1);
  jet.dg[1] = fd::central([&](double t) { return g_at(p.x1, t); }, p.x2, h2);
  // Second derivatives use a coarser step to keep roundoff down.
  const double k1 = fd::spatial_step(p.x1, 1e-3), k2 = fd::spatial_step(p.x2, 1e-3);
  jet.ddg[0][0] = fd::central_second([&](double t) { return g_at(t, p.x2); }, p.x1, k1);
  jet.ddg[1][1] = fd::central_second([&](double t) { return g_at(p.x1, t); }, p.x2, k2);
  jet.ddg[0][1] = fd::central(
      [&](double t) {
        return fd::central([&](double u) { return g_at(t, u); }, p.x2, k2);
      },
      p.x1, k1);
  jet.ddg[1][0] = jet.ddg[0][1];
  return jet;
}

Christoffel christoffel_at(const SurfaceModel& surface, const ChartPoint& p, DerivativePath path) {
  require_in_chart(surface, p);
  const bool analytic = path == DerivativePath::Analytic ||
                        (path == DerivativePath::Auto && surface.has_analytic_christoffel());
  if (analytic) {
    if (!surface.has_analytic_christoffel()) {
      fail(ErrorKind::ValidationError, surface.name() + " has no analytic Christoffel symbols");
    }
    return surface.analytic_christoffel(p);
  }
  auto g_at = [&](double x1, double x2) { return surface.metric({x1, x2}); };
  MetricJet jet;
  jet.g = g_at(p.x1, p.x2);
  jet.dg[0] = fd::central([&](double t) { return g_at(t, p.x2); }, p.x1, fd::spatial_step(p.x1));
  jet.dg[1] = fd::central([&](double t) { return g_at(p.x1, t); }, p.x2, fd::spatial_step(p.x2));
  return christoffel_from_jet(jet);
}

double gauss_curvature(const SurfaceModel& surface, const ChartPoint& p, DerivativePath path) {
  require_in_chart(surface, p);
  const bool analytic = path == DerivativePath::Analytic ||
                        (path == DerivativePath::Auto && surface.has_analytic_curvature());
  if (analytic) {
    if (!surface.has_analytic_curvature()) {
      fail(ErrorKind::ValidationError, surface.name() + " has no analytic curvature");
    }
    return surface.analytic_curvature(p);
  }
  return gauss_from_jet(metric_jet_fd(surface, p));
}

TangentVector curvature_operator(const SurfaceModel& surface, const ChartPoint& p,
                                 const TangentVector& x, const TangentVector& y,
                                 const TangentVector& z) {
  const Mat2 g = metric_at(surface, p);
  const double k = gauss_curvature(surface, p);
  return k * (inner(g, y, z) * x - inner(g, x, z) * y);
}

// ---------------------------------------------------------------------------

BaseCurve::BaseCurve(JetFn jet, double s0, double s1, std::string description)
    : jet_(std::move(jet)), s0_(s0), s1_(s1), description_(std::move(description)) {
  if (!(s1 > s0)) fail(ErrorKind::ValidationError, "curve domain must satisfy s0 < s1");
}

bool BaseCurve::in_domain(double s) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(s1_ - s0_));
  return s >= s0_ - tol && s <= s1_ + tol;
}

BaseJet BaseCurve::jet(double s) const {
  if (!in_domain(s)) {
    fail(ErrorKind::DomainBoundary, description_ + " evaluated at s=" + std::to_string(s) +
                                        " outside [" + std::to_string(s0_) + ", " +
                                        std::to_string(s1_) + "]");
  }
  return jet_(s);
}

BaseCurve BaseCurve::from_position(std::function<Vec2(double)> position, double s0, double s1,
                                   std::string description) {
  auto jet = [position = std::move(position), s0, s1](double s) {
    BaseJet j;
    j.pos = position(s);
    const double h = fd::spatial_step(s);
    j.vel = fd::first(position, s, h, s0, s1);
    const double k = fd::curve_step(s);
    j.acc = fd::first([&](double t) { return fd::central(position, t, h); }, s, k, s0, s1);
    return j;
  };
  return BaseCurve(std::move(jet), s0, s1, std::move(description));
}

BaseCurve BaseCurve::from_expressions(const Expression& x1, const Expression& x2, double s0,
                                      double s1) {
  const Expression v1 = x1.derivative(0), v2 = x2.derivative(0);
  const Expression a1 = v1.derivative(0), a2 = v2.derivative(0);
  auto jet = [=](double s) {
    BaseJet j;
    j.pos = {x1.eval(s), x2.eval(s)};
    j.vel = {v1.eval(s), v2.eval(s)};
    j.acc = {a1.eval(s), a2.eval(s)};
    return j;
  };
  return BaseCurve(std::move(jet), s0, s1,
                   "curve(" + x1.to_string() + ", " + x2.to_string() + ")");
}

BaseCurve plane_line(const Vec2& p, const Vec2& v, double s0, double s1) {
  return BaseCurve(
      [p, v](double s) {
        BaseJet j;
        j.pos = p + s * v;
        j.vel = v;
        return j;
      },
      s0, s1, "line");
}

BaseCurve plane_circle(const Vec2& center, double radius, double speed, double s0, double s1,
                       double phase) {
  if (!(radius > 0.0)) fail(ErrorKind::ValidationError, "circle radius must be positive");
  const double w = speed / radius;
  return BaseCurve(
      [center, radius, w, phase](double s) {
        const double a = phase + w * s;
        const double c = std::cos(a), sn = std::sin(a);
        BaseJet j;
        j.pos = center + radius * Vec2(c, sn);
        j.vel = radius * w * Vec2(-sn, c);
        j.acc = -radius * w * w * Vec2(c, sn);
        return j;
      },
      s0, s1, "circle");
}

BaseCurve sphere_parallel(double colatitude, double omega, double s0, double s1, double lon0) {
  return BaseCurve(
      [colatitude, omega, lon0](double s) {
        BaseJet j;
        j.pos = {colatitude, lon0 + omega * s};
        j.vel = {0.0, omega};
        return j;
      },
      s0, s1, "parallel circle");
}

TangentVector covariant_deriv_along(const SurfaceModel& surface, const BaseCurve& curve,
                                    const FieldFn& field, double s) {
  const Vec2 dv = fd::first(field, s, fd::curve_step(s), curve.s0(), curve.s1());
  return covariant_deriv_along(surface, curve, FieldJet{field(s), dv}, s);
}

TangentVector covariant_deriv_along(const SurfaceModel& surface, const BaseCurve& curve,
                                    const FieldJet& field, double s) {
  const BaseJet j = curve.jet(s);
  const Christoffel gam = christoffel_at(surface, ChartPoint::from(j.pos));
  return field.dv + gam.contract(j.vel, field.v);
}

TangentVector parallel_transport(const SurfaceModel& surface, const BaseCurve& curve,
                                 const TangentVector& v0, double s0, double s1) {
  if (s0 == s1) return v0;
  OdeRhs<2> rhs = [&](double s, const OdeState<2>& v) -> OdeState<2> {
    const BaseJet j = curve.jet(s);
    return -christoffel_at(surface, ChartPoint::from(j.pos)).contract(j.vel, v);
  };
  return rk4_integrate<2>(rhs, s0, v0, s1, rk4_steps_for(s1 - s0));
}

BaseCurve geodesic(const SurfaceModel& surface, const ChartPoint& p, const TangentVector& v,
                   double length) {
  metric_at(surface, p);
  OdeRhs<4> rhs = [surface](double, const OdeState<4>& y) -> OdeState<4> {
    const ChartPoint q{y[0], y[1]};
    const Vec2 vel(y[2], y[3]);
    const Vec2 acc = -christoffel_at(surface, q).contract(vel, vel);
    return OdeState<4>(y[2], y[3], acc[0], acc[1]);
  };
  const OdeState<4> y0(p.x1, p.x2, v[0], v[1]);
  auto traj = std::make_shared<const DenseTrajectory<4>>(rhs, 0.0, y0, length,
                                                         rk4_steps_for(length));
  return BaseCurve(
      [traj](double s) {
        const OdeState<4> y = traj->at(s);
        const OdeState<4> dy = traj->rhs()(s, y);
        BaseJet j;
        j.pos = {y[0], y[1]};
        j.vel = {y[2], y[3]};
        j.acc = {dy[2], dy[3]};
        return j;
      },
      0.0, length, "geodesic");
}

BaseFrenetSample frenet_from_jet(const SurfaceModel& surface, const BaseJet& jet) {
  const ChartPoint p = ChartPoint::from(jet.pos);
  const Mat2 g = metric_at(surface, p);
  const double r = norm(g, jet.vel);
  if (!(r > 1e-12)) fail(ErrorKind::ZeroSpeed, "curve speed vanishes at " + point_str(p));
  const Vec2 a = jet.acc + christoffel_at(surface, p).contract(jet.vel, jet.vel);
  BaseFrenetSample f;
  f.speed = r;
  f.t = jet.vel / r;
  f.n = rotate_quarter(g, f.t);
  f.kappa = inner(g, a, rotate_quarter(g, jet.vel)) / (r * r * r);
  return f;
}

BaseFrenetSample BaseFrenet::at(double s) const { return frenet_from_jet(surface_, curve_.jet(s)); }

BaseFrenet base_frenet(const SurfaceModel& surface, const BaseCurve& curve, int samples) {
  for (int i = 0; i <= samples; ++i) {
    const double s = curve.s0() + curve.length() * i / std::max(1, samples);
    frenet_from_jet(surface, curve.jet(s));
  }
  return BaseFrenet(surface, curve);
}

}  // namespace utb
