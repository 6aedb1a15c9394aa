#include "utb/lift_builders.hpp"
#include "utb/lifted.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace utb;

namespace {

const double kEq = kPi / 2;

StructureParams unit_half() { return validate_params({1.0, 1.0, 0.0, 0.5, 1.0, 0.0}); }

LiftSpec lift(LiftKind kind, double angle = 0.0) {
  LiftSpec s;
  s.kind = kind;
  s.angle = angle;
  return s;
}

LiftedCurve equator_lift(LiftKind kind, double angle = 0.0) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  return make_lift(s, sphere_parallel(kEq, 1.0, 0.0, 3.0), lift(kind, angle));
}

BaseCurve expression_curve(const std::string& x1, const std::string& x2, double s1) {
  return BaseCurve::from_expressions(Expression::parse(x1, {"s"}), Expression::parse(x2, {"s"}), 0.0, s1);
}

}  // namespace

TEST(MakeLift, NaturalLiftFollowsVelocity) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const LiftedCurve c = make_lift(s, sphere_parallel(0.8, 1.7, 0.0, 2.0), lift(LiftKind::Natural));
  for (double t : {0.0, 0.7, 1.9}) {
    const LiftState st = c.state(t);
    const Mat2 g = metric_at(s, st.point.x);
    EXPECT_NEAR(inner(g, st.e, st.point.u), norm(g, st.e), 1e-12);
  }
}

TEST(MakeLift, ParallelNormalAlongGeodesicIsOrthogonal) {
  const LiftedCurve c = equator_lift(LiftKind::Parallel, kPi / 2);
  for (double t : {0.0, 1.0, 2.5}) {
    const LiftState st = c.state(t);
    EXPECT_NEAR(inner(metric_at(c.surface(), st.point.x), st.e, st.point.u), 0.0, 1e-10);
  }
}

TEST(MakeLift, ConstantAngleEqualsParallelAlongGeodesic) {
  const LiftedCurve a = equator_lift(LiftKind::Parallel, 0.6);
  const LiftedCurve b = equator_lift(LiftKind::ConstantAngle, 0.6);
  for (double t : {0.0, 1.0, 2.9}) EXPECT_LT((a.state(t).point.u - b.state(t).point.u).norm(), 1e-10);
}

TEST(MakeLift, FieldsAreUnitAndOrthogonalToTheirDerivative) {
  const SurfaceModel s = SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", ChartDomain{-3, 3, -3, 3});
  const BaseCurve base = expression_curve("0.5*s", "0.3*s+0.1*sin(2*s)", 2.0);
  for (LiftKind k : {LiftKind::Natural, LiftKind::Parallel, LiftKind::ConstantAngle}) {
    const LiftedCurve c = make_lift(s, base, lift(k, 0.4));
    for (int i = 0; i <= 20; ++i) {
      const LiftState st = c.state(2.0 * i / 20.0);
      const Mat2 g = metric_at(s, st.point.x);
      EXPECT_NEAR(inner(g, st.point.u, st.point.u), 1.0, 1e-8) << to_string(k);
      EXPECT_NEAR(inner(g, st.w, st.point.u), 0.0, 1e-8) << to_string(k);
    }
  }
}

TEST(MakeLift, PrescribedFieldIsNormalizedWithWarning) {
  LiftSpec spec = lift(LiftKind::Prescribed);
  spec.field = [](double t) { return Vec2(2.0 * std::cos(t), 2.0 * std::sin(t)); };
  const LiftedCurve c = make_lift(SurfaceModel::plane(), plane_line({0, 0}, {1, 0}, 0.0, 1.0), spec);
  EXPECT_NEAR(c.state(0.5).point.u.norm(), 1.0, 1e-12);
  EXPECT_FALSE(c.warnings().empty());
}

TEST(MakeLift, StalledBaseIsRejected) {
  EXPECT_EQ(error_kind_of([] {
              make_lift(SurfaceModel::plane(), plane_line({0, 0}, {0, 0}, 0.0, 1.0), lift(LiftKind::Natural));
            }),
            ErrorKind::ZeroSpeed);
}

TEST(LiftedTangent, NaturalLiftOfGeodesicIsHorizontal) {
  const LiftedCurve c = equator_lift(LiftKind::Natural);
  const BundleTangent a = lifted_tangent(canonical_params(), c, 1.3);
  EXPECT_LT((a.h - c.state(1.3).e).norm(), 1e-12);
  EXPECT_LT(a.t.norm(), 1e-10);
}

TEST(LiftedTangent, ParallelLiftHasNoTangentialPart) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const LiftedCurve c = make_lift(s, sphere_parallel(0.9, 1.0, 0.0, 2.0), lift(LiftKind::Parallel, 0.3));
  for (double t : {0.2, 1.0, 1.8}) EXPECT_LT(lifted_tangent(canonical_params(), c, t).t.norm(), 1e-8);
}

TEST(LiftedTangent, RotatingFieldOnPlaneLine) {
  LiftSpec spec = lift(LiftKind::Prescribed);
  spec.field = [](double t) { return Vec2(std::cos(t), std::sin(t)); };
  const LiftedCurve c = make_lift(SurfaceModel::plane(), plane_line({0, 0}, {1, 0}, 0.0, 2.0), spec);
  for (double t : {0.3, 1.0, 1.7}) {
    const BundleTangent a = lifted_tangent(canonical_params(), c, t);
    EXPECT_LT((a.h - Vec2(1.0, 0.0)).norm(), 1e-12);
    EXPECT_LT((a.t - Vec2(-std::sin(t), std::cos(t))).norm(), 1e-8);
    EXPECT_NEAR(a.t.dot(c.state(t).point.u), 0.0, 1e-8);
  }
}

TEST(G1Speed, NaturalGeodesicAtCanonicalParams) {
  EXPECT_NEAR(g1_speed(canonical_params(), equator_lift(LiftKind::Natural), 0.4), 2.0, 1e-10);
}

TEST(G1Speed, ParallelGeodesicAtHalfLambda) {
  EXPECT_NEAR(g1_speed(unit_half(), equator_lift(LiftKind::Parallel, 0.7), 0.4), 1.0, 1e-10);
}

TEST(Reparameterize, UnitSpeedCurveIsUnchanged) {
  const LiftedCurve c = equator_lift(LiftKind::Parallel, 0.7);
  const LiftedCurve r = reparameterize_arclength(unit_half(), c);
  EXPECT_NEAR(r.length(), c.length(), 1e-8);
  for (double t : {0.0, 1.1, 2.9}) {
    EXPECT_NEAR(r.state(t).point.x.x2, c.state(c.s0() + t).point.x.x2, 1e-8);
  }
}

TEST(Reparameterize, ConstantSpeedRescalesLength) {
  const LiftedCurve c = equator_lift(LiftKind::Natural);
  const LiftedCurve r = reparameterize_arclength(canonical_params(), c);
  EXPECT_NEAR(r.length(), 2.0 * c.length(), 1e-6);
  EXPECT_TRUE(r.arclength());
}

TEST(Reparameterize, VariableSpeedBecomesUnitSpeed) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseCurve base = expression_curve("1.2+0.3*sin(s)", "s+0.2*s^2", 2.0);
  const LiftedCurve r = reparameterize_arclength(canonical_params(), make_lift(s, base, lift(LiftKind::ConstantAngle, 0.5)));
  for (int i = 0; i <= 40; ++i) {
    EXPECT_NEAR(g1_speed(canonical_params(), r, r.length() * i / 40.0), 1.0, 1e-6);
  }
}

TEST(Reparameterize, IsIdempotent) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseCurve base = expression_curve("1.2+0.3*sin(s)", "s", 2.0);
  const LiftedCurve once = reparameterize_arclength(canonical_params(), make_lift(s, base, lift(LiftKind::Natural)));
  const LiftedCurve twice = reparameterize_arclength(canonical_params(), once);
  EXPECT_NEAR(once.length(), twice.length(), 1e-8);
  for (int i = 0; i <= 10; ++i) {
    const double t = once.length() * i / 10.0;
    EXPECT_LT((once.state(t).point.u - twice.state(t).point.u).norm(), 1e-8);
    EXPECT_NEAR(once.state(t).point.x.x1, twice.state(t).point.x.x1, 1e-8);
  }
}

TEST(CovariantAlongLifted, ConstantHorizontalFieldOnPlaneLine) {
  const LiftedCurve c = make_lift(SurfaceModel::plane(), plane_line({0, 0}, {1, 0.5}, 0.0, 2.0),
                                  lift(LiftKind::Parallel, 0.4));
  const BundleTangent d = covariant_along_lifted(
      canonical_params(), c, [](double) { return BundleTangent{Vec2(0.3, 0.5), Vec2::Zero()}; }, 1.0);
  EXPECT_LT(d.h.norm() + d.t.norm(), 1e-10);
}

TEST(Frenet, NaturalGreatCircleHasVanishingCurvature) {
  EXPECT_EQ(error_kind_of([] { frenet_at(canonical_params(), equator_lift(LiftKind::Natural), 1.0); }),
            ErrorKind::VanishingCurvature);
}

TEST(Frenet, ParallelSmallCircleHasConstantCurvature) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const LiftedCurve c = reparameterize_arclength(
      canonical_params(), make_lift(s, sphere_parallel(1.0, 1.0, 0.0, 2.0), lift(LiftKind::Parallel, 0.3)));
  const FrenetApparatus f = frenet_apparatus(canonical_params(), c, 100);
  double lo = 1e300, hi = -1e300;
  for (const FrenetPoint& p : f.samples) {
    lo = std::min(lo, p.kappa);
    hi = std::max(hi, p.kappa);
  }
  EXPECT_GT(lo, kKappaMin);
  EXPECT_LT(hi - lo, 1e-4);
}

TEST(Frenet, FrameIsOrthonormalAndResidualsSmall) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const StructureParams p = canonical_params();
  const LiftedCurve c = reparameterize_arclength(p, slant_lift(p, s, sphere_parallel(1.0, 1.0, 0.0, 2.0), 0.3, 0.5, 1));
  for (int i = 0; i <= 10; ++i) {
    const double t = c.length() * i / 10.0;
    const FrenetPoint f = frenet_at(p, c, t, true);
    const LocalGeometry loc = local_at(c, t);
    EXPECT_NEAR(g1(p, loc, f.T, f.T), 1.0, 1e-6);
    EXPECT_NEAR(g1(p, loc, f.N, f.N), 1.0, 1e-6);
    EXPECT_NEAR(g1(p, loc, f.B, f.B), 1.0, 1e-6);
    EXPECT_NEAR(g1(p, loc, f.T, f.N), 0.0, 1e-6);
    EXPECT_NEAR(g1(p, loc, f.T, f.B), 0.0, 1e-6);
    EXPECT_NEAR(g1(p, loc, f.N, f.B), 0.0, 1e-6);
    for (double r : f.residual) EXPECT_LT(r, 1e-4);
  }
}

TEST(Frenet, OrientationReversalFlipsTorsionOnly) {
  const StructureParams p = canonical_params();
  const SurfaceModel s = SurfaceModel::from_expressions("1", "0", "1+x1^2/4", ChartDomain{-3, 3, -3, 3});
  const SurfaceModel r = SurfaceModel::from_expressions("1+x2^2/4", "0", "1", ChartDomain{-3, 3, -3, 3});
  LiftSpec a = lift(LiftKind::Prescribed), b = lift(LiftKind::Prescribed);
  a.field = [](double t) { return Vec2(std::cos(0.5 * t), std::sin(0.5 * t)); };
  b.field = [](double t) { return Vec2(std::sin(0.5 * t), std::cos(0.5 * t)); };
  const LiftedCurve ca = make_lift(s, expression_curve("0.2+s", "0.3*sin(s)", 2.0), a);
  const LiftedCurve cb = make_lift(r, expression_curve("0.3*sin(s)", "0.2+s", 2.0), b);
  for (double t : {0.3, 1.0, 1.6}) {
    const FrenetPoint fa = frenet_at(p, ca, t), fb = frenet_at(p, cb, t);
    EXPECT_NEAR(fa.kappa, fb.kappa, 1e-4);
    EXPECT_NEAR(fa.tau, -fb.tau, 1e-4);
    EXPECT_GT(std::abs(fa.tau), 1e-3);
  }
}

TEST(SampleGrid, IncludesEndpoints) {
  const std::vector<double> g = sample_grid(1.0, 3.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 1.0);
  EXPECT_DOUBLE_EQ(g.back(), 3.0);
  EXPECT_DOUBLE_EQ(g[2], 2.0);
}
