#include "utb/lift_builders.hpp"

#include "utb/errors.hpp"
#include "utb/ode.hpp"

#include <cmath>

namespace utb {

LiftedCurve slant_lift(const StructureParams& p, const SurfaceModel& surface,
                       const BaseCurve& base, double phi0, double c, int sign) {
  if (c == 0.0) fail(ErrorKind::ValidationError, "slant constant must be nonzero");
  base_frenet(surface, base);
  const double k = 2.0 * p.lambda * c / (p.c1 + p.d1);
  const double A = 1.0 / (p.alpha * k * k) - p.d1;
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto radicand = [=](double phi) {
    const double cs = std::cos(phi);
    return (cs * cs * A - p.c1) / p.c2;
  };
  if (std::cos(phi0) * k <= 0.0) {
    fail(ErrorKind::ValidationError, "cos(phi0) must have the sign of the slant constant");
  }
  auto rate = [=](double s, double phi) {
    const BaseFrenetSample f = frenet_from_jet(surface, base.jet(s));
    double q = radicand(phi);
    if (q < 0.0) {
      if (q < -1e-12) {
        fail(ErrorKind::NegativeRadicand,
             "slant lift has no real continuation at s=" + std::to_string(s));
      }
      q = 0.0;
    }
    return -f.speed * f.kappa + sg * f.speed * std::sqrt(q);
  };
  if (radicand(phi0) <= 0.0) {
    fail(ErrorKind::NegativeRadicand, "slant lift radicand not positive at phi0");
  }
  OdeRhs<1> rhs = [rate](double s, const OdeState<1>& y) {
    return OdeState<1>(rate(s, y[0]));
  };
  auto traj = std::make_shared<const DenseTrajectory<1>>(rhs, base.s0(), OdeState<1>(phi0),
                                                         base.s1(), rk4_steps_for(base.length()));
  LiftSpec spec;
  spec.kind = LiftKind::AngleProfile;
  spec.phi = [traj, rate](double s) {
    const double phi = traj->at(s)[0];
    return std::pair{phi, rate(s, phi)};
  };
  LiftedCurve curve = make_lift(surface, base, spec);
  return curve;
}

LiftedCurve slant_lift_geodesic(const StructureParams& p, const SurfaceModel& surface,
                                const BaseCurve& base, double phi0, double c, int sign) {
  if (c == 0.0) fail(ErrorKind::ValidationError, "slant constant must be nonzero");
  base_frenet(surface, base);
  const double r = frenet_from_jet(surface, base.jet(base.s0())).speed;
  for (double s : sample_grid(base.s0(), base.s1(), 33)) {
    const BaseFrenetSample f = frenet_from_jet(surface, base.jet(s));
    if (std::abs(f.kappa) > 1e-8 || std::abs(f.speed - r) > 1e-8 * std::max(1.0, r)) {
      fail(ErrorKind::ValidationError, "base is not a constant-speed geodesic at s=" + std::to_string(s));
    }
  }
  const double k = 2.0 * p.lambda * c / (p.c1 + p.d1);
  const double A = 1.0 / (p.alpha * k * k) - p.d1;
  if (std::cos(phi0) * k <= 0.0) {
    fail(ErrorKind::ValidationError, "cos(phi0) must have the sign of the slant constant");
  }
  const double cs = std::cos(phi0);
  const double q0 = (cs * cs * A - p.c1) / p.c2;
  if (q0 < 0.0) fail(ErrorKind::NegativeRadicand, "slant lift radicand negative at phi0");
  const double w = r * r * A / (2.0 * p.c2);
  OdeRhs<2> rhs = [w](double, const OdeState<2>& y) {
    return OdeState<2>(y[1], -w * std::sin(2.0 * y[0]));
  };
  const double sg = sign >= 0 ? 1.0 : -1.0;
  auto traj = std::make_shared<const DenseTrajectory<2>>(
      rhs, base.s0(), OdeState<2>(phi0, sg * r * std::sqrt(q0)), base.s1(), rk4_steps_for(base.length()));
  LiftSpec spec;
  spec.kind = LiftKind::AngleProfile;
  spec.phi = [traj](double s) {
    const OdeState<2> y = traj->at(s);
    return std::pair{y[0], y[1]};
  };
  return make_lift(surface, base, spec);
}

LiftedCurve frenet_driven_curve(const StructureParams& p, const SurfaceModel& surface,
                                const FrenetDrive& drive) {
  if (!drive.kappa || !drive.c) fail(ErrorKind::ValidationError, "drive needs kappa and c");
  using S8 = OdeState<8>;

  // Initial state from (x0, psi0, theta0, beta0) in the g1-orthonormal frame
  // xi1, (Ju)^h, (Ju)^t.
  const BundlePoint bp = chart_bundle_point(surface, Vec3(drive.x0.x1, drive.x0.x2, drive.psi0));
  const LocalGeometry loc0 = local_geometry(surface, bp);
  const Vec2 u0 = bp.u, ju0 = loc0.J(u0);
  const double ct = std::cos(drive.theta0), st = std::sin(drive.theta0);
  const Vec2 e0 = ct * u0 / std::sqrt(p.alpha * (p.c1 + p.d1)) +
                  st * std::cos(drive.beta0) * ju0 / std::sqrt(p.alpha * p.c1);
  const Vec2 w0 = st * std::sin(drive.beta0) * ju0 / std::sqrt(p.alpha * p.c2);
  S8 y0;
  y0 << drive.x0.x1, drive.x0.x2, u0[0], u0[1], e0[0], e0[1], w0[0], w0[1];

  const double sg = drive.sign >= 0 ? 1.0 : -1.0;
  OdeRhs<8> rhs = [p, surface, drive, sg](double s, const S8& y) -> S8 {
    const ChartPoint x{y[0], y[1]};
    const Mat2 g = metric_at(surface, x);
    Vec2 X(y[2], y[3]);
    X /= norm(g, X);
    const LocalGeometry loc = local_geometry(surface, {x, X});
    const Vec2 E(y[4], y[5]), W(y[6], y[7]);
    const BundleTangent T{E, loc.proj(W)};
    const ContactTensors ct = contact_tensors(p, loc);
    const double cth = g1(p, loc, T, ct.xi);
    const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
    const double c = drive.c(s);
    if (!(std::abs(c) < sth)) {
      fail(ErrorKind::DomainViolation,
           "prescribed normal component " + std::to_string(c) + " not attainable at s=" + std::to_string(s));
    }
    const BundleTangent P = (T - cth * ct.xi) / sth;
    const BundleTangent Q = -sth * ct.xi + cth * P;
    const BundleTangent Z = g1_cross(p, loc, T, Q);
    const double a = -c / sth;
    const BundleTangent N = a * Q + sg * std::sqrt(1.0 - a * a) * Z;
    const BundleTangent acc = drive.kappa(s) * N;
    const BundleTangent tens = nabla1_along(p, loc, E, W, T, Vec2::Zero(), Vec2::Zero());
    const Vec2 nabla_e = acc.h - tens.h;
    const Vec2 nabla_w = (acc.t - tens.t) - loc.ip(W, W) * X;
    const Vec2 dX = W - loc.gamma.contract(E, X);
    const Vec2 dE = nabla_e - loc.gamma.contract(E, E);
    const Vec2 dW = nabla_w - loc.gamma.contract(E, W);
    S8 out;
    out << E[0], E[1], dX[0], dX[1], dE[0], dE[1], dW[0], dW[1];
    return out;
  };
  auto traj = std::make_shared<const DenseTrajectory<8>>(rhs, 0.0, y0, drive.length,
                                                         rk4_steps_for(drive.length));
  BaseCurve base(
      [traj](double s) {
        const S8 y = traj->at(s);
        const S8 dy = traj->rhs()(s, y);
        BaseJet j;
        j.pos = {y[0], y[1]};
        j.vel = {y[4], y[5]};
        j.acc = {dy[4], dy[5]};
        return j;
      },
      0.0, drive.length, "frenet-driven base");
  LiftFieldFn field = [traj](double s) {
    const S8 y = traj->at(s);
    return LiftSample{Vec2(y[2], y[3]), Vec2(y[6], y[7])};
  };
  return LiftedCurve(surface, base, field, "frenet-driven curve", LiftKind::Custom);
}

}  // namespace utb
