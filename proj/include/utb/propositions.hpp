#pragma once

#include "utb/classification.hpp"
#include "utb/scenarios.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace utb {

enum class Verdict { Pass, Fail, HypothesisNotMet };

std::string to_string(Verdict v);
/// Errors: ParseError.
Verdict parse_verdict(const std::string& text);

/// A named condition with ok = residual < tol. Logical conditions use the
/// number of violations as residual and tol = 0.5.
struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool ok = false;
  std::string detail;
};

Check make_check(std::string name, double residual, double tol, std::string detail = {});
Check logical_check(std::string name, int violations, std::string detail = {});

struct MemberEvidence {
  std::string name;
  std::string description;
  bool built = false;
  bool qualifies = false;  ///< meets the member-level hypotheses
  TVerdict t_verdict = TVerdict::None;
  NVerdict n_verdict = NVerdict::Undefined;
  double max_abs_n = std::numeric_limits<double>::quiet_NaN();
  double n_mean = std::numeric_limits<double>::quiet_NaN();
  double n_dev = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;  ///< contribution to the conclusion
  bool ok = true;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;
};

struct PropositionResult {
  std::string id;
  std::string scenario;
  std::vector<Check> hypotheses;
  std::vector<Check> conclusions;
  Verdict verdict = Verdict::HypothesisNotMet;
  std::vector<MemberEvidence> members;
  std::string witness;             ///< member whose samples form the evidence table
  std::vector<SampleRow> evidence;
  std::vector<std::string> notes;

  double max_conclusion_residual() const;
};

struct VerifyOptions {
  int samples = 200;
  double classify_tol = kClassifyTol;
  double zero_tol = 1e-4;   ///< vanishing quantities
  double rel_tol = 1e-3;    ///< constancy of nonzero quantities
  double param_tol = 1e-12;
  double curvature_tol = 1e-8;
  double speed_tol = 1e-6;
  double linear_tol = 1e-4;
};

/// Legendre and slant members of the family on the unit sphere with
/// c2 = c1 + d1 are N-Legendre.
PropositionResult verify_prop_31(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt = {});
/// (cos theta)' = c kappa~ for a non-slant N-slant curve on the unit sphere.
PropositionResult verify_prop_32(const StructureParams& params, const SurfaceModel& surface,
                                 const CurveSpec& curve, const VerifyOptions& opt = {});
/// Sasakian sphere: among members with tau~ = K, N-Legendre iff geodesic base,
/// N-slant iff base curvature is a nonzero constant.
PropositionResult verify_prop_33(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt = {});
/// K != 1: N-slant iff (K-1) kappa / kappa~ is a nonzero constant; geodesic
/// bases give N-Legendre.
PropositionResult verify_prop_34(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt = {});
/// Linear angle at base speed 2 lambda / (c1 + d1).
PropositionResult verify_prop_36(const StructureParams& params, const SurfaceModel& surface,
                                 const CurveSpec& curve, const VerifyOptions& opt = {});

/// Left side of the N-Legendre condition for a linear angle theta = e s + f,
/// for both signs.
std::pair<double, double> linear_angle_legendre_lhs(const StructureParams& params, double K, double xi_norm, double e,
                                   double kappa);
/// theta predicted for an N-slant curve with constant c_bar, for both signs.
/// Errors: DomainViolation when the arcsin argument leaves [-1, 1].
std::pair<double, double> linear_angle_slant_theta(const StructureParams& params, double K, double e, double kappa,
                                     double kappa_tilde, double c_bar);

struct ChoRatios {
  ConstancyStats plus, minus;          ///< (tau~ + 1)/kappa~, (tau~ - 1)/kappa~
  double rel_plus = 0.0, rel_minus = 0.0;  ///< relative standard deviations
  ConstancyStats scaled_plus, scaled_minus;  ///< |tau~ + a1| / kappa~, |tau~ - a1| / kappa~
  double rel_scaled_plus = 0.0, rel_scaled_minus = 0.0;
  double best_rel() const;
};

ChoRatios cho_ratios(const StructureParams& params, const std::vector<SampleRow>& rows);

double relative_std(const std::vector<double>& values);

/// Builds and classifies every family member; members that fail to build
/// carry the error in `note`.
std::vector<std::pair<MemberEvidence, ClassificationReport>> classify_family(
    const StructureParams& params, const SurfaceModel& surface, const std::vector<CurveSpec>& family,
    const VerifyOptions& opt);

}  // namespace utb
