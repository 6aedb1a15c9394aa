#include "utb/surface.hpp"

#include "test_util.hpp"

#include <cmath>
#include <random>

using namespace utb;

namespace {

const double kEq = kPi / 2;

std::vector<SurfaceModel> builtin_surfaces() {
  return {SurfaceModel::plane(), SurfaceModel::sphere(1.0), SurfaceModel::sphere(2.0),
          SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", ChartDomain{-3, 3, -3, 3})};
}

ChartPoint random_point(const SurfaceModel& s, std::mt19937_64& rng) {
  const ChartDomain d = s.domain();
  auto pick = [&](double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      lo = -2.0;
      hi = 2.0;
    }
    const double m = 0.1 * (hi - lo);
    return std::uniform_real_distribution<double>(lo + m, hi - m)(rng);
  };
  return {pick(d.lo1, d.hi1), pick(d.lo2, d.hi2)};
}

Vec2 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

}  // namespace

TEST(Metric, PlaneIsIdentity) {
  EXPECT_TRUE(metric_at(SurfaceModel::plane(), {3.0, -7.0}).isApprox(Mat2::Identity()));
}

TEST(Metric, UnitSphereAtEquator) {
  const Mat2 g = metric_at(SurfaceModel::sphere(1.0), {kEq, 0.0});
  EXPECT_NEAR((g - Mat2::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Metric, RadiusTwoSphereAtEquator) {
  const Mat2 g = metric_at(SurfaceModel::sphere(2.0), {kEq, 0.0});
  EXPECT_NEAR((g - 4.0 * Mat2::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
}

TEST(Metric, OutsideChartIsRejected) {
  EXPECT_EQ(error_kind_of([] { metric_at(SurfaceModel::sphere(1.0), {0.0, 0.0}); }), ErrorKind::OutOfChart);
}

TEST(Metric, NonPositiveDefiniteIsRejected) {
  EXPECT_EQ(error_kind_of([] {
              SurfaceModel::from_expressions("1", "2", "1", ChartDomain{-1, 1, -1, 1});
            }),
            ErrorKind::NonPositiveDefinite);
}

TEST(Christoffel, PlaneVanishes) {
  const Christoffel c = christoffel_at(SurfaceModel::plane(), {0.3, 0.4});
  for (int k = 0; k < 2; ++k) EXPECT_EQ(c.up[k].cwiseAbs().maxCoeff(), 0.0);
}

TEST(Christoffel, UnitSphereAtEquator) {
  const Christoffel c = christoffel_at(SurfaceModel::sphere(1.0), {kEq, 0.0});
  EXPECT_NEAR(c(0, 1, 1), 0.0, 1e-15);
  EXPECT_NEAR(c(1, 0, 1), 0.0, 1e-15);
}

TEST(Christoffel, UnitSphereAwayFromEquator) {
  const double th = 0.8;
  const Christoffel c = christoffel_at(SurfaceModel::sphere(1.0), {th, 0.2});
  EXPECT_NEAR(c(0, 1, 1), -std::sin(th) * std::cos(th), 1e-14);
  EXPECT_NEAR(c(1, 0, 1), std::cos(th) / std::sin(th), 1e-14);
}

TEST(Christoffel, MismatchedAnalyticDataIsRejected) {
  auto metric = [](const ChartPoint& p) {
    Mat2 g = Mat2::Identity();
    g(1, 1) = 1.0 + p.x1 * p.x1;
    return g;
  };
  auto wrong = [](const ChartPoint&) { return Christoffel{}; };
  EXPECT_EQ(error_kind_of([&] {
              SurfaceModel::custom("bad", metric, ChartDomain{-1, 1, -1, 1}, wrong);
            }),
            ErrorKind::InvariantViolation);
}

TEST(Christoffel, AnalyticMatchesDifferencesOnBuiltinSurfaces) {
  std::mt19937_64 rng(7);
  for (const SurfaceModel& s : builtin_surfaces()) {
    for (int i = 0; i < 100; ++i) {
      const ChartPoint p = random_point(s, rng);
      const Christoffel a = christoffel_at(s, p, DerivativePath::Analytic);
      const Christoffel f = christoffel_at(s, p, DerivativePath::FiniteDifference);
      for (int k = 0; k < 2; ++k) {
        const double scale = std::max(1.0, a.up[k].cwiseAbs().maxCoeff());
        EXPECT_LT((a.up[k] - f.up[k]).cwiseAbs().maxCoeff() / scale, 1e-6) << s.name();
      }
    }
  }
}

TEST(GaussCurvature, UnitSphereIsOne) {
  EXPECT_NEAR(gauss_curvature(SurfaceModel::sphere(1.0), {0.7, 1.1}), 1.0, 1e-12);
}

TEST(GaussCurvature, PlaneIsZero) { EXPECT_EQ(gauss_curvature(SurfaceModel::plane(), {1.0, 2.0}), 0.0); }

TEST(GaussCurvature, RadiusTwoSphereIsQuarter) {
  const SurfaceModel s = SurfaceModel::sphere(2.0);
  EXPECT_NEAR(gauss_curvature(s, {1.2, 0.3}), 0.25, 1e-12);
  EXPECT_NEAR(gauss_curvature(s, {1.2, 0.3}, DerivativePath::FiniteDifference), 0.25, 1e-6);
}

TEST(GaussCurvature, TorusOfRevolutionExpression) {
  const SurfaceModel s = SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", ChartDomain{-3, 3, -3, 3});
  const double x1 = 0.9;
  EXPECT_NEAR(gauss_curvature(s, {x1, 0.0}), std::cos(x1) / (2.0 + std::cos(x1)), 1e-10);
}

TEST(CurvatureOperator, PlaneVanishes) {
  const Vec2 r = curvature_operator(SurfaceModel::plane(), {0, 0}, {1, 2}, {3, -1}, {0.5, 0.5});
  EXPECT_EQ(r.norm(), 0.0);
}

TEST(CurvatureOperator, UnitSphereSectionalCurvature) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const ChartPoint p{1.0, 0.0};
  const Mat2 g = metric_at(s, p);
  const Vec2 x{1.0, 0.0};
  const Vec2 y{0.0, 1.0 / std::sin(1.0)};
  EXPECT_NEAR(inner(g, curvature_operator(s, p, x, y, y), x), 1.0, 1e-12);
}

TEST(CurvatureOperator, VanishesForEqualArguments) {
  for (const SurfaceModel& s : builtin_surfaces()) {
    const Vec2 x{0.3, -0.8};
    EXPECT_EQ(curvature_operator(s, {1.0, 0.5}, x, x, {1.0, 1.0}).norm(), 0.0);
  }
}

TEST(CurvatureOperator, Antisymmetries) {
  std::mt19937_64 rng(11);
  for (const SurfaceModel& s : builtin_surfaces()) {
    for (int i = 0; i < 20; ++i) {
      const ChartPoint p = random_point(s, rng);
      const Vec2 x = random_vec(rng), y = random_vec(rng), z = random_vec(rng), w = random_vec(rng);
      const Mat2 g = metric_at(s, p);
      EXPECT_EQ((curvature_operator(s, p, x, y, z) + curvature_operator(s, p, y, x, z)).norm(), 0.0);
      const double a = inner(g, curvature_operator(s, p, x, y, z), w);
      const double b = inner(g, curvature_operator(s, p, x, y, w), z);
      EXPECT_NEAR(a, -b, 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(CovariantDerivative, PlaneConstantField) {
  const BaseCurve c = plane_circle({0, 0}, 1.0, 1.0, 0.0, 3.0);
  const Vec2 d = covariant_deriv_along(SurfaceModel::plane(), c, [](double) { return Vec2(1.0, 2.0); }, 1.0);
  EXPECT_LT(d.norm(), 1e-10);
}

TEST(CovariantDerivative, EquatorTangentIsParallel) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseCurve eq = sphere_parallel(kEq, 1.0, 0.0, 3.0);
  const Vec2 d = covariant_deriv_along(s, eq, [&](double t) { return eq.velocity(t); }, 1.2);
  EXPECT_LT(d.norm(), 1e-10);
}

TEST(CovariantDerivative, PlaneLinearField) {
  const BaseCurve c = plane_circle({1, 0}, 2.0, 0.5, 0.0, 3.0);
  const Vec2 d = covariant_deriv_along(SurfaceModel::plane(), c, [](double t) { return Vec2(t, 0.0); }, 1.0);
  EXPECT_NEAR(d.x(), 1.0, 1e-10);
  EXPECT_NEAR(d.y(), 0.0, 1e-10);
}

TEST(ParallelTransport, PlaneIsIdentity) {
  const BaseCurve c = plane_circle({0, 0}, 1.0, 1.0, 0.0, 4.0);
  const Vec2 v = parallel_transport(SurfaceModel::plane(), c, {1.0, 0.0}, 0.0, 4.0);
  EXPECT_NEAR((v - Vec2(1.0, 0.0)).norm(), 0.0, 1e-12);
}

TEST(ParallelTransport, EquatorTangentStaysTangent) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseCurve eq = sphere_parallel(kEq, 1.0, 0.0, 3.0);
  const Vec2 v = parallel_transport(s, eq, eq.velocity(0.0), 0.0, 2.5);
  EXPECT_NEAR((v - eq.velocity(2.5)).norm(), 0.0, 1e-10);
}

TEST(ParallelTransport, PreservesInnerProducts) {
  std::mt19937_64 rng(3);
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseCurve c = sphere_parallel(0.9, 1.3, 0.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const Vec2 v0 = random_vec(rng), w0 = random_vec(rng);
    const double before = inner(metric_at(s, c.point(0.0)), v0, w0);
    const Vec2 v = parallel_transport(s, c, v0, 0.0, 2.0);
    const Vec2 w = parallel_transport(s, c, w0, 0.0, 2.0);
    EXPECT_NEAR(inner(metric_at(s, c.point(2.0)), v, w), before, 1e-8);
  }
}

TEST(Geodesic, PlaneGivesStraightSegment) {
  const BaseCurve c = geodesic(SurfaceModel::plane(), {0.0, 0.0}, {1.0, 0.0}, 1.0);
  for (double s : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_NEAR(c.point(s).x1, s, 1e-12);
    EXPECT_NEAR(c.point(s).x2, 0.0, 1e-12);
  }
}

TEST(Geodesic, EquatorialStartStaysOnEquator) {
  const BaseCurve c = geodesic(SurfaceModel::sphere(1.0), {kEq, 0.0}, {0.0, 1.0}, 2.0);
  for (double s : {0.5, 1.0, 2.0}) {
    EXPECT_NEAR(c.point(s).x1, kEq, 1e-10);
    EXPECT_NEAR(c.point(s).x2, s, 1e-10);
  }
}

TEST(Geodesic, SpeedIsConstant) {
  for (const SurfaceModel& s : builtin_surfaces()) {
    const ChartPoint p = s.kind() == SurfaceModel::Kind::Sphere ? ChartPoint{1.0, 0.0} : ChartPoint{0.2, 0.1};
    const Vec2 v{0.3, 0.4};
    const BaseCurve c = geodesic(s, p, v, 1.5);
    const double r0 = norm(metric_at(s, c.point(0.0)), c.velocity(0.0));
    for (int i = 1; i <= 30; ++i) {
      const double t = 1.5 * i / 30.0;
      EXPECT_NEAR(norm(metric_at(s, c.point(t)), c.velocity(t)), r0, 1e-8) << s.name();
    }
  }
}

TEST(BaseFrenet, UnitCircleHasUnitCurvature) {
  const BaseFrenet f = base_frenet(SurfaceModel::plane(), plane_circle({0, 0}, 1.0, 1.0, 0.0, 3.0));
  EXPECT_NEAR(f.at(1.0).kappa, 1.0, 1e-10);
}

TEST(BaseFrenet, LineHasZeroCurvature) {
  const BaseFrenet f = base_frenet(SurfaceModel::plane(), plane_line({0, 0}, {1, 2}, 0.0, 1.0));
  EXPECT_NEAR(f.at(0.5).kappa, 0.0, 1e-12);
}

TEST(BaseFrenet, SmallCircleCurvatureIsCotangent) {
  const double th = 1.0;
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const BaseFrenet f = base_frenet(s, sphere_parallel(th, 1.0, 0.0, 3.0));
  for (double t : {0.0, 1.0, 2.5}) EXPECT_NEAR(std::abs(f.at(t).kappa), std::cos(th) / std::sin(th), 1e-10);
}

TEST(BaseFrenet, FrameIsOrthonormalAndSatisfiesFrenetEquation) {
  const SurfaceModel s = SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", ChartDomain{-3, 3, -3, 3});
  const BaseCurve c = BaseCurve::from_expressions(Expression::parse("0.5*s", {"s"}),
                                                  Expression::parse("0.3*s+0.1*sin(2*s)", {"s"}), 0.0, 2.0);
  const BaseFrenet f = base_frenet(s, c);
  for (int i = 1; i < 20; ++i) {
    const double t = 2.0 * i / 20.0;
    const BaseFrenetSample fs = f.at(t);
    const Mat2 g = metric_at(s, c.point(t));
    EXPECT_NEAR(inner(g, fs.t, fs.n), 0.0, 1e-12);
    EXPECT_NEAR(inner(g, fs.n, fs.n), 1.0, 1e-12);
    const Vec2 dT = covariant_deriv_along(s, c, [&](double u) { return f.at(u).t; }, t) / fs.speed;
    EXPECT_LT(norm(g, dT - fs.kappa * fs.n), 1e-6);
  }
}

TEST(BaseFrenet, StalledCurveIsRejected) {
  const BaseCurve c = plane_line({0, 0}, {0, 0}, 0.0, 1.0);
  EXPECT_EQ(error_kind_of([&] { base_frenet(SurfaceModel::plane(), c); }), ErrorKind::ZeroSpeed);
}
