#include "utb/bundle.hpp"
#include "utb/runner.hpp"

#include "test_util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace utb;

namespace {

StructureParams unit_half() { return validate_params({1.0, 1.0, 0.0, 0.5, 1.0, 0.0}); }

BundlePoint plane_point() { return {{0.0, 0.0}, {1.0, 0.0}}; }

BundleTangent random_tangent(const LocalGeometry& loc, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {Vec2(n(rng), n(rng)), loc.proj(Vec2(n(rng), n(rng)))};
}

StructureParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const double c1 = u(rng), c2 = u(rng);
  const double d1 = std::uniform_real_distribution<double>(-0.4 * c1, 2.0)(rng);
  return validate_params({c1, c2, d1, u(rng), std::sqrt(c1 / c2), 0.0});
}

}  // namespace

TEST(ValidateParams, CanonicalHasUnitAlpha) {
  const StructureParams p = validate_params({4.0, 4.0, 0.0, 1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(p.alpha, 1.0);
  EXPECT_DOUBLE_EQ(canonical_params().alpha, 1.0);
}

TEST(ValidateParams, NegativeSumIsRejected) {
  EXPECT_EQ(error_kind_of([] { validate_params({1.0, 1.0, -2.0, 1.0, 1.0, 0.0}); }),
            ErrorKind::PositivityViolation);
}

TEST(ValidateParams, HalfLambdaHasUnitAlpha) { EXPECT_DOUBLE_EQ(unit_half().alpha, 1.0); }

TEST(ValidateParams, DerivedConstants) {
  const StructureParams p = validate_params({4.0, 1.0, 0.0, 1.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(p.a2, 0.5);
  EXPECT_DOUBLE_EQ(p.b2, -1.0 / (2.0 * 3.0));
  EXPECT_TRUE(p.phi_compatible);
  EXPECT_FALSE(validate_params({4.0, 4.0, 0.0, 1.0, 2.0, 0.0}).phi_compatible);
}

TEST(ValidateParams, ZeroDenominators) {
  EXPECT_EQ(error_kind_of([] { validate_params({4, 4, 0, 0.0, 1, 0}); }), ErrorKind::ZeroDenominator);
  EXPECT_EQ(error_kind_of([] { validate_params({4, 4, 0, 1, 0.0, 0}); }), ErrorKind::ZeroDenominator);
  EXPECT_EQ(error_kind_of([] { validate_params({4, 4, 0, 1, 1, -1}); }), ErrorKind::ZeroDenominator);
}

TEST(LocalGeometry, NonUnitFiberPointIsRejected) {
  EXPECT_EQ(error_kind_of([] { local_geometry(SurfaceModel::plane(), {{0, 0}, {2.0, 0.0}}); }),
            ErrorKind::InvariantViolation);
}

TEST(G1, HorizontalExample) {
  const BundleTangent a{{1.0, 0.0}, {0.0, 0.0}};
  EXPECT_NEAR(g1(unit_half(), SurfaceModel::plane(), plane_point(), a, a), 1.0, 1e-15);
}

TEST(G1, TangentialExample) {
  const BundleTangent a{{0.0, 0.0}, {0.0, 1.0}};
  EXPECT_NEAR(g1(unit_half(), SurfaceModel::plane(), plane_point(), a, a), 1.0, 1e-15);
}

TEST(G1, MixedArgumentsAreOrthogonal) {
  const BundleTangent h{{0.3, 0.7}, {0.0, 0.0}};
  const BundleTangent t{{0.0, 0.0}, {0.0, 1.0}};
  for (const StructureParams& p : {canonical_params(), unit_half()}) {
    EXPECT_EQ(g1(p, SurfaceModel::plane(), plane_point(), h, t), 0.0);
  }
}

TEST(G1, ChartMatrixIsPositiveDefinite) {
  std::mt19937_64 rng(5);
  const SurfaceModel s = SurfaceModel::sphere(2.0);
  for (int i = 0; i < 50; ++i) {
    const StructureParams p = random_params(rng);
    const Vec3 y(std::uniform_real_distribution<double>(0.3, 2.8)(rng), 0.4, 1.7);
    const Eigen::SelfAdjointEigenSolver<Mat3> es(chart_metric(p, s, y));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Contact, ExamplesAtCanonicalParams) {
  const ContactTensors ct = contact_tensors(canonical_params(), SurfaceModel::sphere(1.0), {{1.0, 0.3}, {1.0, 0.0}});
  EXPECT_NEAR(g1(ct.params, ct.loc, ct.xi, ct.xi), 1.0, 1e-14);
  const BundleTangent pxi = ct.phi(ct.xi);
  EXPECT_LT(pxi.h.norm() + pxi.t.norm(), 1e-14);
  EXPECT_EQ(ct.eta({{0.0, 0.0}, ct.loc.proj(Vec2(0.4, 1.0))}), 0.0);
}

TEST(Contact, IdentitiesAtRandomDraws) {
  std::mt19937_64 rng(20240101);
  const std::vector<SurfaceModel> surfaces{SurfaceModel::plane(), SurfaceModel::sphere(1.0), SurfaceModel::sphere(3.0)};
  for (int i = 0; i < 300; ++i) {
    const StructureParams p = random_params(rng);
    const SurfaceModel& s = surfaces[i % surfaces.size()];
    const double psi = std::uniform_real_distribution<double>(-kPi, kPi)(rng);
    const Vec3 y(s.kind() == SurfaceModel::Kind::Sphere ? 1.1 : 0.5, 0.2, psi);
    const ContactTensors ct = contact_tensors(p, s, chart_bundle_point(s, y));
    const BundleTangent a = random_tangent(ct.loc, rng), b = random_tangent(ct.loc, rng);
    EXPECT_NEAR(ct.eta(ct.xi), 1.0, 1e-9);
    const BundleTangent pp = ct.phi(ct.phi(a)) + a - ct.xi * ct.eta(a);
    EXPECT_LT(g1_norm(p, ct.loc, pp), 1e-9);
    EXPECT_NEAR(g1(p, ct.loc, ct.phi(a), ct.phi(b)), g1(p, ct.loc, a, b) - ct.eta(a) * ct.eta(b), 1e-9);
    EXPECT_NEAR(g1(p, ct.loc, a, ct.xi), ct.eta(a), 1e-9);
  }
}

TEST(Nabla1, FlatHorizontalCaseVanishes) {
  const BundleTangent r = nabla1(canonical_params(), SurfaceModel::plane(), plane_point(), NablaCase::hh,
                                 {1.0, 0.0}, {0.3, -2.0}, {0.0, 0.0});
  EXPECT_EQ(r.h.norm() + r.t.norm(), 0.0);
}

TEST(Nabla1, TangentialCaseOrthogonalToU) {
  const BundleTangent r = nabla1(canonical_params(), SurfaceModel::sphere(1.0), {{1.0, 0.0}, {1.0, 0.0}},
                                 NablaCase::tt, {0.0, 0.5}, {0.0, 0.7}, {0.0, 0.0});
  EXPECT_EQ(r.h.norm() + r.t.norm(), 0.0);
}

TEST(Nabla1, PlaneHorizontalExampleWithD1) {
  const StructureParams p = validate_params({2.0, 4.0, 2.0, 1.0, std::sqrt(0.5), 0.0});
  const BundleTangent r =
      nabla1(p, SurfaceModel::plane(), plane_point(), NablaCase::hh, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0});
  EXPECT_NEAR(r.h.norm(), 0.0, 1e-15);
  EXPECT_NEAR(r.t.x(), 0.0, 1e-15);
  EXPECT_NEAR(r.t.y(), -p.d1 / (2.0 * p.c2), 1e-15);
}

TEST(Nabla1, DerivativeTermInPureTangentialCaseIsRejected) {
  EXPECT_EQ(error_kind_of([] {
              nabla1(canonical_params(), SurfaceModel::plane(), plane_point(), NablaCase::th, {1, 0}, {0, 1}, {1, 0});
            }),
            ErrorKind::CaseMismatch);
  EXPECT_EQ(error_kind_of([] { parse_nabla_case("hx"); }), ErrorKind::CaseMismatch);
  EXPECT_EQ(parse_nabla_case("ht"), NablaCase::ht);
}

TEST(Oracle, PlaneMetricComponents) {
  const StructureParams p = unit_half();
  const Mat3 m = chart_metric(p, SurfaceModel::plane(), Vec3(0.2, -0.3, 0.9));
  const Vec3 diag(p.alpha, p.alpha, p.alpha * p.c2);
  EXPECT_LT((m - Mat3(diag.asDiagonal())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Oracle, PlaneChristoffelsVanish) {
  const Christoffel3 c = chart_connection_oracle(unit_half(), SurfaceModel::plane(), Vec3(0.2, -0.3, 0.9));
  for (const Mat3& m : c) EXPECT_LT(m.cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Oracle, ConnectionAgreesOnPlaneAndSpheres) {
  for (const SurfaceModel& s : {SurfaceModel::plane(), SurfaceModel::sphere(1.0), SurfaceModel::sphere(2.0)}) {
    const OracleComparison c = compare_with_oracle(canonical_params(), s, 40, 17);
    EXPECT_EQ(c.evaluations, 40);
    EXPECT_LT(c.max_rel_error, 1e-5) << s.name();
  }
}

TEST(Oracle, MetricCompatibleAndTorsionFree) {
  std::mt19937_64 rng(9);
  const StructureParams p = random_params(rng);
  for (const SurfaceModel& s : {SurfaceModel::sphere(1.0), SurfaceModel::sphere(2.0)}) {
    const ConnectionResiduals r = connection_residuals(p, s, 20, 23);
    EXPECT_LT(r.torsion, 1e-5);
    EXPECT_LT(r.metric, 1e-5);
  }
}

TEST(Oracle, ChartRoundTrip) {
  const SurfaceModel s = SurfaceModel::sphere(1.0);
  const Vec3 y(1.0, 0.5, 0.3), v(0.2, -0.7, 1.1);
  EXPECT_LT((bundle_to_chart(s, y, chart_to_bundle(s, y, v)) - v).norm(), 1e-13);
}

TEST(Sasakian, Examples) {
  const StructureParams a1_two = validate_params({4.0, 1.0, 0.0, 1.0, 2.0, 0.0});
  EXPECT_TRUE(sasakian_check(canonical_params(), SurfaceModel::sphere(1.0)).is_sasakian);
  EXPECT_FALSE(sasakian_check(a1_two, SurfaceModel::sphere(1.0)).is_sasakian);
  EXPECT_FALSE(sasakian_check(canonical_params(), SurfaceModel::plane()).is_sasakian);
  const SasakianReport r = sasakian_check(validate_params({1.0, 4.0, 3.0, 1.0, 0.5, 0.0}), SurfaceModel::sphere(2.0));
  EXPECT_TRUE(r.is_sasakian);
  EXPECT_DOUBLE_EQ(r.a1_squared, 0.25);
}

TEST(Sasakian, NonConstantCurvatureIsRejected) {
  const SurfaceModel s = SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", ChartDomain{-3, 3, -3, 3});
  EXPECT_EQ(error_kind_of([&] { sasakian_check(canonical_params(), s); }), ErrorKind::NonConstantCurvature);
}
