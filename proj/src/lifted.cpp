#include "utb/lifted.hpp"

#include "utb/errors.hpp"
#include "utb/finite_difference.hpp"
#include "utb/ode.hpp"
#include "utb/parallel.hpp"

#include <cmath>

namespace utb {

LiftedCurve::LiftedCurve(SurfaceModel surface, BaseCurve base, LiftFieldFn field,
                         std::string description, LiftKind kind)
    : surface_(std::move(surface)),
      base_(std::move(base)),
      s0_(base_.s0()),
      s1_(base_.s1()),
      kind_(kind),
      description_(std::move(description)) {
  state_ = [surface = surface_, base = base_, field = std::move(field)](double s) {
    const BaseJet jet = base.jet(s);
    const LiftSample ls = field(s);
    LiftState st;
    st.point = {ChartPoint::from(jet.pos), ls.x};
    st.e = jet.vel;
    st.w = ls.w;
    st.frenet = frenet_from_jet(surface, jet);
    st.raw = s;
    return st;
  };
}

bool LiftedCurve::in_domain(double s) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(s1_ - s0_));
  return s >= s0_ - tol && s <= s1_ + tol;
}

LiftState LiftedCurve::state(double s) const {
  if (!in_domain(s)) {
    fail(ErrorKind::DomainBoundary, "lifted curve evaluated at s=" + std::to_string(s) +
                                        " outside [" + std::to_string(s0_) + ", " +
                                        std::to_string(s1_) + "]");
  }
  return state_(s);
}

LiftedCurve LiftedCurve::reparameterized(std::function<std::pair<double, double>(double)> sigma,
                                         double s0, double s1, bool arclength) const {
  LiftedCurve c = *this;
  c.s0_ = s0;
  c.s1_ = s1;
  c.arclength_ = arclength;
  c.state_ = [old = state_, sigma = std::move(sigma)](double s) {
    const auto [t, rate] = sigma(s);
    LiftState st = old(t);
    st.e *= rate;
    st.w *= rate;
    st.frenet.speed *= std::abs(rate);
    return st;
  };
  return c;
}

std::string to_string(LiftKind kind) {
  switch (kind) {
    case LiftKind::Natural: return "natural";
    case LiftKind::Parallel: return "parallel";
    case LiftKind::ConstantAngle: return "constant_angle";
    case LiftKind::Prescribed: return "prescribed";
    case LiftKind::AngleProfile: return "angle_profile";
    case LiftKind::Custom: return "custom";
  }
  return "?";
}

LiftedCurve make_lift(const SurfaceModel& surface, const BaseCurve& base, const LiftSpec& spec) {
  base_frenet(surface, base);
  const double th = spec.angle;
  LiftFieldFn field;
  std::string desc;
  switch (spec.kind) {
    case LiftKind::Natural:
      desc = "natural lift";
      field = [surface, base](double s) {
        const BaseFrenetSample f = frenet_from_jet(surface, base.jet(s));
        return LiftSample{f.t, f.speed * f.kappa * f.n};
      };
      break;
    case LiftKind::ConstantAngle:
      desc = "constant_angle lift";
      field = [surface, base, th](double s) {
        const BaseJet j = base.jet(s);
        const BaseFrenetSample f = frenet_from_jet(surface, j);
        const Vec2 x = std::cos(th) * f.t + std::sin(th) * f.n;
        const Mat2 g = surface.metric(ChartPoint::from(j.pos));
        return LiftSample{x, f.speed * f.kappa * rotate_quarter(g, x)};
      };
      break;
    case LiftKind::AngleProfile: {
      if (!spec.phi) fail(ErrorKind::ValidationError, "angle profile lift needs phi(s)");
      desc = "angle profile lift";
      field = [surface, base, phi = spec.phi](double s) {
        const BaseJet j = base.jet(s);
        const BaseFrenetSample f = frenet_from_jet(surface, j);
        const auto [p, dp] = phi(s);
        const Vec2 x = std::cos(p) * f.t + std::sin(p) * f.n;
        const Mat2 g = surface.metric(ChartPoint::from(j.pos));
        return LiftSample{x, (dp + f.speed * f.kappa) * rotate_quarter(g, x)};
      };
      break;
    }
    case LiftKind::Parallel: {
      desc = "parallel lift";
      const BaseFrenetSample f0 = frenet_from_jet(surface, base.jet(base.s0()));
      const Vec2 x0 = std::cos(th) * f0.t + std::sin(th) * f0.n;
      OdeRhs<2> rhs = [surface, base](double s, const OdeState<2>& v) -> OdeState<2> {
        const BaseJet j = base.jet(s);
        return -christoffel_at(surface, ChartPoint::from(j.pos)).contract(j.vel, v);
      };
      auto traj = std::make_shared<const DenseTrajectory<2>>(rhs, base.s0(), x0, base.s1(),
                                                             rk4_steps_for(base.length()));
      field = [traj](double s) { return LiftSample{traj->at(s), Vec2::Zero()}; };
      break;
    }
    case LiftKind::Prescribed: {
      if (!spec.field) fail(ErrorKind::ValidationError, "prescribed lift needs a field");
      desc = "prescribed lift";
      auto raw = spec.field;
      auto unit = [surface, base, raw](double s) -> Vec2 {
        const Vec2 x = raw(s);
        const double n = norm(surface.metric(base.point(s)), x);
        if (!std::isfinite(n) || n < 1e-8) {
          fail(ErrorKind::NonUnitField, "prescribed field vanishes at s=" + std::to_string(s));
        }
        return x / n;
      };
      field = [surface, base, unit](double s) {
        const Vec2 w = covariant_deriv_along(surface, base, FieldFn(unit), s);
        return LiftSample{unit(s), w};
      };
      LiftedCurve c(surface, base, field, desc, spec.kind);
      double worst = 0.0;
      for (double s : sample_grid(base.s0(), base.s1(), 64)) {
        worst = std::max(worst, std::abs(norm(surface.metric(base.point(s)), raw(s)) - 1.0));
        unit(s);
      }
      if (worst > 1e-8) {
        c.add_warning("prescribed field renormalized (max |norm - 1| = " + std::to_string(worst) + ")");
      }
      return c;
    }
    case LiftKind::Custom:
      fail(ErrorKind::ValidationError, "custom lifts are built directly, not through make_lift");
  }
  return LiftedCurve(surface, base, std::move(field), desc, spec.kind);
}

LocalGeometry local_at(const LiftedCurve& curve, double s) {
  return local_geometry(curve.surface(), curve.state(s).point);
}

namespace {

BundleTangent tangent_of(const LocalGeometry& loc, const LiftState& st) {
  return {st.e, loc.proj(st.w)};
}

}  // namespace

BundleTangent lifted_tangent(const StructureParams&, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  return tangent_of(local_geometry(curve.surface(), st.point), st);
}

double g1_speed(const StructureParams& params, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  return g1_norm(params, loc, tangent_of(loc, st));
}

LiftedCurve reparameterize_arclength(const StructureParams& params, const LiftedCurve& curve) {
  struct Map {
    std::vector<double> sigma, cum, speed;
  };
  // Five-point Gauss-Legendre nodes and weights on [-1, 1].
  static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
  static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
  auto speed = [params, curve](double t) { return g1_speed(params, curve, t); };
  auto integral = [speed](double a, double b) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += gw[k] * speed(m + h * gx[k]);
    return h * acc;
  };

  const int n = std::max(1024, static_cast<int>(std::ceil(64.0 * curve.length())));
  auto map = std::make_shared<Map>();
  map->sigma.resize(n + 1);
  map->cum.assign(n + 1, 0.0);
  map->speed.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    map->sigma[i] = i == n ? curve.s1() : curve.s0() + curve.length() * i / n;
    map->speed[i] = speed(map->sigma[i]);
    if (!(map->speed[i] > 1e-12)) {
      fail(ErrorKind::ZeroSpeed, "g1 speed vanishes at s=" + std::to_string(map->sigma[i]));
    }
  }
  for (int i = 0; i < n; ++i) {
    map->cum[i + 1] = map->cum[i] + integral(map->sigma[i], map->sigma[i + 1]);
  }
  const double total = map->cum[n];
  const double start = curve.s0();

  auto inverse = [map, speed, integral, start, n](double s) -> std::pair<double, double> {
    const Map& m = *map;
    const double target = std::clamp(s - start, 0.0, m.cum[n]);
    const auto it = std::upper_bound(m.cum.begin(), m.cum.end(), target);
    int i = static_cast<int>(it - m.cum.begin()) - 1;
    i = std::clamp(i, 0, n - 1);
    // Cubic Hermite guess in (length, sigma), then Newton on the quadrature.
    const double l0 = m.cum[i], l1 = m.cum[i + 1];
    const double dl = l1 - l0;
    const double q = (target - l0) / dl;
    const double h00 = (1 + 2 * q) * (1 - q) * (1 - q), h10 = q * (1 - q) * (1 - q);
    const double h01 = q * q * (3 - 2 * q), h11 = q * q * (q - 1);
    double t = h00 * m.sigma[i] + h10 * dl / m.speed[i] + h01 * m.sigma[i + 1] +
               h11 * dl / m.speed[i + 1];
    for (int k = 0; k < 2; ++k) {
      const double f = l0 + integral(m.sigma[i], t) - target;
      t -= f / speed(t);
    }
    return {t, 1.0 / speed(t)};
  };
  LiftedCurve c = curve.reparameterized(inverse, start, start + total, true);
  return c;
}

BundleTangent covariant_along_lifted(const StructureParams& params, const LiftedCurve& curve,
                                     const BundleFieldFn& field, double s) {
  using V4 = Eigen::Vector4d;
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  auto pack = [&](double t) {
    const BundleTangent f = field(t);
    return V4(f.h[0], f.h[1], f.t[0], f.t[1]);
  };
  const V4 f = pack(s);
  const V4 d = fd::first(pack, s, fd::curve_step(s), curve.s0(), curve.s1());
  const BundleTangent value{Vec2(f[0], f[1]), loc.proj(Vec2(f[2], f[3]))};
  const Vec2 nh = Vec2(d[0], d[1]) + loc.gamma.contract(st.e, value.h);
  const Vec2 nt = Vec2(d[2], d[3]) + loc.gamma.contract(st.e, value.t);
  return nabla1_along(params, loc, st.e, st.w, value, nh, nt);
}

std::pair<BundleTangent, BundleTangent> unit_tangent_and_acceleration(
    const StructureParams& params, const LiftedCurve& curve, double s) {
  auto unit = [&](double t) {
    const LiftState st = curve.state(t);
    const LocalGeometry loc = local_geometry(curve.surface(), st.point);
    const BundleTangent a = tangent_of(loc, st);
    return a / g1_norm(params, loc, a);
  };
  const double v = g1_speed(params, curve, s);
  const BundleTangent acc = covariant_along_lifted(params, curve, unit, s) / v;
  return {unit(s), acc};
}

BundleTangent g1_cross(const StructureParams& p, const LocalGeometry& loc, const BundleTangent& a,
                       const BundleTangent& b) {
  const Vec2& u = loc.u();
  const Vec2 ju = loc.J(u);
  const std::array<BundleTangent, 3> f{
      BundleTangent{u / std::sqrt(p.alpha * (p.c1 + p.d1)), Vec2::Zero()},
      BundleTangent{ju / std::sqrt(p.alpha * p.c1), Vec2::Zero()},
      BundleTangent{Vec2::Zero(), ju / std::sqrt(p.alpha * p.c2)}};
  Vec3 ca, cb;
  for (int k = 0; k < 3; ++k) {
    ca[k] = g1(p, loc, a, f[k]);
    cb[k] = g1(p, loc, b, f[k]);
  }
  const Vec3 c = ca.cross(cb);
  return c[0] * f[0] + c[1] * f[1] + c[2] * f[2];
}

FrenetPoint frenet_at(const StructureParams& params, const LiftedCurve& curve, double s,
                      bool with_binormal_residual) {
  auto normal = [&](double t) {
    const auto [tt, acc] = unit_tangent_and_acceleration(params, curve, t);
    const double k = g1_norm(params, local_at(curve, t), acc);
    if (!(k >= kKappaMin)) {
      fail(ErrorKind::VanishingCurvature,
           "lifted curvature " + std::to_string(k) + " below threshold at s=" + std::to_string(t));
    }
    return std::tuple{tt, acc / k, k};
  };
  const LocalGeometry loc = local_at(curve, s);
  const double v = g1_speed(params, curve, s);
  FrenetPoint fp;
  fp.s = s;
  std::tie(fp.T, fp.N, fp.kappa) = normal(s);
  fp.B = g1_cross(params, loc, fp.T, fp.N);
  const BundleTangent dN =
      covariant_along_lifted(params, curve, [&](double t) { return std::get<1>(normal(t)); }, s) / v;
  fp.tau = g1(params, loc, dN, fp.B);
  fp.residual[1] = g1_norm(params, loc, dN + fp.kappa * fp.T - fp.tau * fp.B);
  if (with_binormal_residual) {
    auto binormal = [&](double t) {
      const auto [tt, nn, k] = normal(t);
      return g1_cross(params, local_at(curve, t), tt, nn);
    };
    const BundleTangent dB = covariant_along_lifted(params, curve, binormal, s) / v;
    fp.residual[2] = g1_norm(params, loc, dB + fp.tau * fp.N);
  }
  return fp;
}

std::vector<double> sample_grid(double s0, double s1, int samples) {
  std::vector<double> s(std::max(samples, 2));
  const int n = static_cast<int>(s.size()) - 1;
  for (int i = 0; i <= n; ++i) s[i] = i == n ? s1 : s0 + (s1 - s0) * i / n;
  return s;
}

FrenetApparatus frenet_apparatus(const StructureParams& params, const LiftedCurve& curve,
                                 int samples) {
  const std::vector<double> grid = sample_grid(curve.s0(), curve.s1(), samples);
  FrenetApparatus fa;
  fa.samples.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { fa.samples[i] = frenet_at(params, curve, grid[i], true); });
  for (const FrenetPoint& p : fa.samples) {
    fa.max_residual = std::max({fa.max_residual, p.residual[0], p.residual[1], p.residual[2]});
  }
  return fa;
}

}  // namespace utb
