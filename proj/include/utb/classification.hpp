#pragma once

#include "utb/lifted.hpp"

#include <optional>
#include <string>
#include <vector>

namespace utb {

/// Default constancy tolerance and minimum sample count.
inline constexpr double kClassifyTol = 1e-5;
inline constexpr int kClassifySamples = 400;

struct AngleSample {
  double s = 0.0;
  double cos_fp = 0.0;     ///< g1(T~, xi1) / (|T~| |xi1|)
  double cos_paper = 0.0;  ///< sqrt(c1 + d1) g(E, X)
  double theta = 0.0;
  double dtheta = 0.0;
};

struct AngleProfile {
  std::vector<AngleSample> samples;
  double mean = 0.0;
  double max_dev = 0.0;
  double max_column_gap = 0.0;  ///< max |cos_fp - cos_paper|
  bool columns_agree = false;
};

/// cos(theta) from first principles at s; throws InvariantViolation if it
/// exceeds 1 by more than 1e-10.
double cos_theta_fp(const StructureParams& params, const LiftedCurve& curve, double s);
double cos_theta_paper(const StructureParams& params, const LiftedCurve& curve, double s);
/// d/ds cos(theta) by differences.
double dcos_theta(const StructureParams& params, const LiftedCurve& curve, double s);

AngleProfile angle_profile(const StructureParams& params, const LiftedCurve& curve,
                           int samples = kClassifySamples);

/// g1(T~, xi1) with T~ the g1-unit tangent.
double t_xi_product(const StructureParams& params, const LiftedCurve& curve, double s);
/// |xi1| computed from the metric.
double xi_norm(const StructureParams& params, const LocalGeometry& loc);

/// g1(N~, xi1) on a uniform grid. Errors: VanishingCurvature.
std::vector<double> n_xi_direct(const StructureParams& params, const LiftedCurve& curve,
                                int samples = kClassifySamples);

struct DecompositionData {
  double s = 0.0;
  double r = 0.0;
  double kappa = 0.0;
  double coef_t = 0.0;       ///< lambda cos(theta) / (r sqrt(c1+d1))
  double beta_plus = 0.0;    ///< +(1/r) sqrt(r^2 - (lambda/sqrt(c1+d1))^2 cos^2 theta)
  double beta_minus = 0.0;
  double beta_fp = 0.0;      ///< g(N, X)
  double beta_fp_abs = 0.0;  ///< sqrt(1 - g(T,X)^2)
  double unit_residual = 0.0;  ///< g(T,X)^2 + beta_fp^2 - 1
  int branch = 1;            ///< sign of beta_fp (+1 when zero)
  Vec2 e_coefs = Vec2::Zero();  ///< E = e_coefs[0] X + e_coefs[1] nabla_E X
  double e_reconstruction = 0.0;  ///< |E - reconstruction|, NaN when nabla_E X ~ 0
};

/// Both sign branches of beta, the measured g(N,X) and the decomposition
/// of E. Errors: NegativeRadicand.
DecompositionData beta_of(const StructureParams& params, const LiftedCurve& curve, double s);

struct CurvatureTerm {
  double direct = 0.0;       ///< R(E, X, X, nabla_E X) = g(R(E,X)X, nabla_E X)
  double printed_form = 0.0;   ///< r((cos/(r sqrt(c1+d1)))' - r beta kappa) K, beta = g(N,X)
};

CurvatureTerm curvature_term(const StructureParams& params, const LiftedCurve& curve, double s);

struct FormulaSample {
  double s = 0.0;
  double plus = 0.0;   ///< closed form with "+" in the base-curvature term
  double minus = 0.0;  ///< closed form with "-"
  double printed_plus = 0.0;   ///< same with the extra factor r as printed
  double printed_minus = 0.0;
  double intermediate = 0.0;    ///< intermediate form with the direct curvature term
  double matching = 0.0;  ///< branch selected by sign(g(N,X))
  double kappa_tilde = 0.0;
  double tau_tilde = 0.0;
  double n_direct = 0.0;
  DecompositionData decomposition;
};

/// Closed-form g1(N~, xi1) on a uniform grid, both branches.
std::vector<FormulaSample> n_xi_formula(const StructureParams& params, const LiftedCurve& curve,
                                        int samples = kClassifySamples);

enum class TVerdict { Legendre, Slant, None };
enum class NVerdict { NLegendre, NSlant, None, Undefined };

std::string to_string(TVerdict v);
std::string to_string(NVerdict v);

struct ConstancyStats {
  double mean = 0.0;
  double max_dev = 0.0;
  double max_abs = 0.0;
};

ConstancyStats constancy(const std::vector<double>& values);

struct SampleRow {
  double s = 0.0;
  double cos_theta_fp = 0.0;
  double cos_theta_paper = 0.0;
  double t_xi = 0.0;
  double n_xi_direct = 0.0;
  double n_xi_formula_plus = 0.0;
  double n_xi_formula_minus = 0.0;
  double kappa_tilde = 0.0;
  double tau_tilde = 0.0;
  double beta_paper = 0.0;
  double beta_fp = 0.0;
  // Diagnostics outside the CSV contract.
  double n_xi_matching = 0.0;
  double n_xi_printed = 0.0;
  double n_xi_intermediate = 0.0;
  double base_kappa = 0.0;
  double base_speed = 0.0;
  double gauss_K = 0.0;
  double frenet_residual = 0.0;
  double theta = 0.0;
  double dtheta = 0.0;
};

struct ClassificationReport {
  std::vector<SampleRow> rows;
  TVerdict t_verdict = TVerdict::None;
  NVerdict n_verdict = NVerdict::Undefined;
  ConstancyStats t_stats, n_stats;
  double slant_constant = 0.0;    ///< mean g1(T~, xi1) when slant
  double n_slant_constant = 0.0;  ///< mean g1(N~, xi1) when N-slant
  double tol = kClassifyTol;
  double max_formula_gap = 0.0;   ///< max |n_direct - n_matching|
  double max_printed_gap = 0.0;   ///< same for the printed variant
  double max_intermediate_gap = 0.0;
  double max_cos_gap = 0.0;       ///< max |cos_fp - cos_paper|
  double max_beta_gap = 0.0;      ///< max |beta_paper - beta_fp|
  double max_frenet_residual = 0.0;
  double max_unit_residual = 0.0;
  std::string n_error;            ///< reason when the N-verdict is undefined
  std::vector<std::string> warnings;
};

/// Verdicts from constancy of g1(T~, xi1) and g1(N~, xi1) on `samples`
/// points. The N-verdict is Undefined (with n_error) when the Frenet frame
/// does not exist; the T-verdict is always produced.
ClassificationReport classify(const StructureParams& params, const LiftedCurve& curve,
                              double tol = kClassifyTol, int samples = kClassifySamples);

/// Notes on the normalization assumptions behind the closed forms for these
/// constants; empty at the canonical configuration.
std::vector<std::string> normalization_gaps(const StructureParams& params);

TVerdict t_verdict_of(const ConstancyStats& st, double tol);
NVerdict n_verdict_of(const ConstancyStats& st, double tol);

}  // namespace utb
