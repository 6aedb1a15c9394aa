#include "utb/classification.hpp"
#include "utb/scenarios.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace utb;

namespace {

const double kEq = kPi / 2;

LiftSpec lift(LiftKind kind, double angle = 0.0) {
  LiftSpec s;
  s.kind = kind;
  s.angle = angle;
  return s;
}

LiftedCurve equator_raw(LiftKind kind, double angle = 0.0) {
  return make_lift(SurfaceModel::sphere(1.0), sphere_parallel(kEq, 1.0, 0.0, 3.0), lift(kind, angle));
}

LiftedCurve arclength(const LiftedCurve& c) { return reparameterize_arclength(canonical_params(), c); }

LiftedCurve sphere_slant(double colatitude) {
  const StructureParams p = canonical_params();
  return arclength(slant_lift(p, SurfaceModel::sphere(1.0), sphere_parallel(colatitude, 1.0, 0.0, 2.0), 0.3, 0.5, 1));
}

LiftedCurve plane_slant_line() {
  const StructureParams p = canonical_params();
  return arclength(slant_lift_geodesic(p, SurfaceModel::plane(), plane_line({0, 0}, {1, 0}, 0.0, 3.0), 0.3, 0.5, 1));
}

LiftedCurve sphere_wavy_natural() {
  const BaseCurve base = BaseCurve::from_expressions(Expression::parse("1.2+0.3*sin(s)", {"s"}),
                                                     Expression::parse("s", {"s"}), 0.0, 2.0);
  return arclength(make_lift(SurfaceModel::sphere(1.0), base, lift(LiftKind::Natural)));
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST(AngleProfile, NaturalGeodesicLiftIsAlongXi) {
  const AngleProfile a = angle_profile(canonical_params(), arclength(equator_raw(LiftKind::Natural)), 50);
  for (const AngleSample& s : a.samples) EXPECT_NEAR(s.cos_fp, 1.0, 1e-10);
}

TEST(AngleProfile, NormalParallelGeodesicLiftIsOrthogonal) {
  const AngleProfile a = angle_profile(canonical_params(), arclength(equator_raw(LiftKind::Parallel, kPi / 2)), 50);
  for (const AngleSample& s : a.samples) EXPECT_NEAR(s.cos_fp, 0.0, 1e-10);
}

TEST(AngleProfile, ParallelGeodesicColumnsAgreeAtCanonicalParams) {
  const double th0 = 0.7;
  const AngleProfile a = angle_profile(canonical_params(), arclength(equator_raw(LiftKind::Parallel, th0)), 50);
  for (const AngleSample& s : a.samples) {
    EXPECT_NEAR(s.cos_fp, std::cos(th0), 1e-9);
    EXPECT_NEAR(s.cos_paper, std::cos(th0), 1e-9);
  }
  EXPECT_TRUE(a.columns_agree);
}

TEST(AngleProfile, CosineBoundedAndDerivativeConsistent) {
  const StructureParams p = canonical_params();
  const LiftedCurve c = sphere_wavy_natural();
  const AngleProfile a = angle_profile(p, c, 200);
  for (std::size_t i = 1; i + 1 < a.samples.size(); ++i) {
    EXPECT_LE(std::abs(a.samples[i].cos_fp), 1.0 + 1e-10);
    const double h = a.samples[i + 1].s - a.samples[i - 1].s;
    const double fd = (a.samples[i + 1].theta - a.samples[i - 1].theta) / h;
    EXPECT_NEAR(a.samples[i].dtheta, fd, 1e-4);
  }
}

TEST(TXi, LegendreIsZeroAndNaturalGeodesicIsOne) {
  const StructureParams p = canonical_params();
  EXPECT_NEAR(t_xi_product(p, arclength(equator_raw(LiftKind::Parallel, kPi / 2)), 1.0), 0.0, 1e-10);
  EXPECT_NEAR(t_xi_product(p, arclength(equator_raw(LiftKind::Natural)), 1.0), 1.0, 1e-10);
}

TEST(TXi, XiIsUnit) {
  const LiftedCurve c = sphere_slant(1.0);
  for (const StructureParams& p : {canonical_params(), validate_params({2.0, 4.0, 2.0, 2.0, std::sqrt(0.5), 0.0})}) {
    EXPECT_NEAR(xi_norm(p, local_at(c, 0.5)), 1.0, 1e-12);
  }
}

TEST(NXiDirect, SlantLiftOnUnitSphereIsNLegendre) {
  EXPECT_LT(max_abs(n_xi_direct(canonical_params(), sphere_slant(1.0), 100)), 1e-5);
}

TEST(NXiDirect, SlantLiftOfPlaneLineIsNLegendre) {
  EXPECT_LT(max_abs(n_xi_direct(canonical_params(), plane_slant_line(), 100)), 1e-5);
}

TEST(BetaOf, OrthogonalAngleAtUnitSpeed) {
  const DecompositionData d = beta_of(canonical_params(), equator_raw(LiftKind::Parallel, kPi / 2), 1.0);
  EXPECT_NEAR(d.r, 1.0, 1e-12);
  EXPECT_NEAR(d.beta_plus, 1.0, 1e-12);
  EXPECT_NEAR(d.beta_minus, -1.0, 1e-12);
}

TEST(BetaOf, ThirdOfPiAtCanonicalParams) {
  const DecompositionData d = beta_of(canonical_params(), equator_raw(LiftKind::Parallel, kPi / 3), 1.0);
  EXPECT_NEAR(d.r, 1.0, 1e-12);
  EXPECT_NEAR(d.beta_plus, std::sqrt(15.0) / 4.0, 1e-10);
  EXPECT_NEAR(d.beta_minus, -std::sqrt(15.0) / 4.0, 1e-10);
}

TEST(BetaOf, UnitDecompositionAndReconstruction) {
  const StructureParams p = canonical_params();
  const LiftedCurve c = sphere_wavy_natural();
  const LiftedCurve d = sphere_slant(0.8);
  for (const LiftedCurve* curve : {&c, &d}) {
    for (int i = 0; i <= 20; ++i) {
      const double s = curve->length() * i / 20.0;
      const DecompositionData b = beta_of(p, *curve, s);
      EXPECT_LT(std::abs(b.unit_residual), 1e-8);
      if (!std::isnan(b.e_reconstruction)) EXPECT_LT(b.e_reconstruction, 1e-6);
      const LiftState st = curve->state(s);
      EXPECT_NEAR(inner(metric_at(curve->surface(), st.point.x), st.point.u, st.w), 0.0, 1e-8);
    }
  }
}

TEST(CurvatureTerm, PlaneVanishes) {
  const CurvatureTerm t = curvature_term(canonical_params(), plane_slant_line(), 1.0);
  EXPECT_EQ(t.direct, 0.0);
  EXPECT_EQ(t.printed_form, 0.0);
}

TEST(CurvatureTerm, ParallelLiftVanishes) {
  const LiftedCurve c = make_lift(SurfaceModel::sphere(1.0), sphere_parallel(1.0, 1.0, 0.0, 2.0), lift(LiftKind::Parallel, 0.4));
  EXPECT_NEAR(curvature_term(canonical_params(), c, 1.0).direct, 0.0, 1e-8);
}

TEST(CurvatureTerm, ConstantCurvatureIdentity) {
  const LiftedCurve c = sphere_wavy_natural();
  for (double s : {0.3, 1.0, 2.0}) {
    const LiftState st = c.state(s);
    const double expected = inner(metric_at(c.surface(), st.point.x), st.e, st.w);
    EXPECT_NEAR(curvature_term(canonical_params(), c, s).direct, expected, 1e-8);
  }
}

TEST(Formula, SlantOnUnitSphereVanishes) {
  for (const FormulaSample& f : n_xi_formula(canonical_params(), sphere_slant(1.0), 50)) {
    EXPECT_NEAR(f.matching, 0.0, 1e-5);
  }
}

TEST(Formula, SlantOnPlaneLineVanishes) {
  for (const FormulaSample& f : n_xi_formula(canonical_params(), plane_slant_line(), 50)) {
    EXPECT_NEAR(f.matching, 0.0, 1e-5);
  }
}

TEST(Formula, NonSlantOnUnitSphereReducesToAngleTerm) {
  const ClassificationReport r = classify(canonical_params(), sphere_wavy_natural(), kClassifyTol, 100);
  ASSERT_NE(r.t_verdict, TVerdict::Slant);
  for (const SampleRow& row : r.rows) {
    EXPECT_NEAR(row.n_xi_matching, -row.dtheta * std::sin(row.theta) / row.kappa_tilde, 1e-5);
  }
}

TEST(Formula, MatchingBranchFollowsSignOfBeta) {
  const ClassificationReport r = classify(canonical_params(), sphere_wavy_natural(), kClassifyTol, 100);
  for (const SampleRow& row : r.rows) {
    const double expected = row.beta_fp >= 0 ? row.n_xi_formula_minus : row.n_xi_formula_plus;
    EXPECT_EQ(row.n_xi_matching, expected);
    EXPECT_LT(std::abs(row.n_xi_direct - row.n_xi_matching), 1e-4);
  }
}

TEST(Formula, AgreesWithDirectValueOnBuiltinScenarios) {
  for (const Scenario& sc : builtin_scenarios()) {
    const StructureParams p = validate_params(sc.params);
    const SurfaceModel s = build_surface(sc.surface);
    const ClassificationReport r = classify(p, build_curve(p, s, sc.curve), kClassifyTol, 200);
    EXPECT_LT(r.max_formula_gap, 1e-4) << sc.name;
  }
}

TEST(Classify, ParallelGeodesicLiftIsSlant) {
  const ClassificationReport r = classify(canonical_params(), arclength(equator_raw(LiftKind::Parallel, 0.6)));
  EXPECT_EQ(r.t_verdict, TVerdict::Slant);
  EXPECT_NEAR(r.slant_constant, std::cos(0.6), 1e-8);
}

TEST(Classify, NormalParallelGeodesicLiftIsLegendre) {
  EXPECT_EQ(classify(canonical_params(), arclength(equator_raw(LiftKind::Parallel, kPi / 2))).t_verdict,
            TVerdict::Legendre);
}

TEST(Classify, SlantOnUnitSphereIsNLegendre) {
  const ClassificationReport r = classify(canonical_params(), sphere_slant(1.0));
  EXPECT_EQ(r.t_verdict, TVerdict::Slant);
  EXPECT_EQ(r.n_verdict, NVerdict::NLegendre);
}

TEST(Classify, VerdictsAreConsistentWithStatistics) {
  const StructureParams p = canonical_params();
  for (const LiftedCurve& c : {sphere_slant(1.0), sphere_wavy_natural(), arclength(equator_raw(LiftKind::Parallel, kPi / 2))}) {
    const ClassificationReport r = classify(p, c, kClassifyTol, 100);
    double max_t_dev = 0.0;
    for (const SampleRow& row : r.rows) max_t_dev = std::max(max_t_dev, std::abs(row.t_xi - r.slant_constant));
    if (r.t_verdict == TVerdict::Slant) {
      EXPECT_LT(max_t_dev, r.tol);
      EXPECT_NE(r.slant_constant, 0.0);
    }
    if (r.t_verdict == TVerdict::Legendre) {
      for (const SampleRow& row : r.rows) EXPECT_LT(std::abs(row.t_xi), r.tol);
    }
  }
}

TEST(Classify, VanishingCurvatureLeavesNUndefined) {
  const LiftedCurve c = arclength(make_lift(SurfaceModel::plane(), plane_line({0, 0}, {1, 0}, 0.0, 2.0), lift(LiftKind::Parallel, kPi / 3)));
  const ClassificationReport r = classify(canonical_params(), c, kClassifyTol, 50);
  EXPECT_EQ(r.t_verdict, TVerdict::Slant);
  EXPECT_EQ(r.n_verdict, NVerdict::Undefined);
  EXPECT_FALSE(r.n_error.empty());
}

TEST(Verdicts, FromStatistics) {
  EXPECT_EQ(t_verdict_of({0.0, 1e-7, 1e-7}, 1e-5), TVerdict::Legendre);
  EXPECT_EQ(t_verdict_of({0.5, 1e-7, 0.5}, 1e-5), TVerdict::Slant);
  EXPECT_EQ(t_verdict_of({0.5, 1e-3, 0.5}, 1e-5), TVerdict::None);
  EXPECT_EQ(n_verdict_of({0.0, 1e-7, 1e-7}, 1e-5), NVerdict::NLegendre);
  EXPECT_EQ(n_verdict_of({-0.2, 1e-7, 0.2}, 1e-5), NVerdict::NSlant);
  EXPECT_EQ(n_verdict_of({0.2, 0.1, 0.3}, 1e-5), NVerdict::None);
}

TEST(Constancy, Statistics) {
  const ConstancyStats st = constancy({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(st.mean, 2.0);
  EXPECT_DOUBLE_EQ(st.max_dev, 1.0);
  EXPECT_DOUBLE_EQ(st.max_abs, 3.0);
}

TEST(NormalizationGaps, OnlyOffCanonicalParams) {
  EXPECT_TRUE(normalization_gaps(canonical_params()).empty());
  EXPECT_FALSE(normalization_gaps(validate_params({2.0, 2.0, 0.0, 1.0, 1.0, 0.0})).empty());
  EXPECT_FALSE(normalization_gaps(validate_params({16.0, 16.0, 0.0, 2.0, 1.0, 0.0})).empty());
}
