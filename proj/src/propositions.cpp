#include "utb/propositions.hpp"

#include "utb/errors.hpp"
#include "utb/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace utb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGeodesicTol = 1e-6;

bool is_slant(TVerdict v) { return v == TVerdict::Slant; }
bool is_slant_or_legendre(TVerdict v) { return v == TVerdict::Slant || v == TVerdict::Legendre; }

std::pair<double, double> curvature_range(const SurfaceModel& surface) {
  const ChartDomain& d = surface.domain();
  auto clampd = [](double v, double fallback) { return std::isfinite(v) ? v : fallback; };
  const double lo1 = clampd(d.lo1, -3.0), hi1 = clampd(d.hi1, 3.0);
  const double lo2 = clampd(d.lo2, -3.0), hi2 = clampd(d.hi2, 3.0);
  double kmin = kInf, kmax = -kInf;
  constexpr int n = 7;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ChartPoint p{lo1 + (hi1 - lo1) * (i + 0.5) / n, lo2 + (hi2 - lo2) * (j + 0.5) / n};
      const double K = gauss_curvature(surface, p);
      kmin = std::min(kmin, K);
      kmax = std::max(kmax, K);
    }
  }
  return {kmin, kmax};
}

Check param_check(const StructureParams& p, const VerifyOptions& opt) {
  return make_check("c2 = c1 + d1", std::abs(p.c2 - p.c1 - p.d1) / std::max(1.0, std::abs(p.c2)),
                    opt.param_tol, fmt::format("c1={} c2={} d1={}", p.c1, p.c2, p.d1));
}

Check unit_curvature_check(const SurfaceModel& surface, const VerifyOptions& opt) {
  const auto [kmin, kmax] = curvature_range(surface);
  return make_check("K = 1", std::max(std::abs(kmin - 1.0), std::abs(kmax - 1.0)), opt.curvature_tol,
                    fmt::format("K in [{:.17g}, {:.17g}]", kmin, kmax));
}

Check non_unit_curvature_check(const SurfaceModel& surface, const VerifyOptions& opt) {
  const auto [kmin, kmax] = curvature_range(surface);
  const bool touches = kmin <= 1.0 + opt.curvature_tol && kmax >= 1.0 - opt.curvature_tol;
  return logical_check("K != 1", touches ? 1 : 0, fmt::format("K in [{:.17g}, {:.17g}]", kmin, kmax));
}

Check sphere_check(const SurfaceModel& surface) {
  return logical_check("surface is a sphere", surface.kind() == SurfaceModel::Kind::Sphere ? 0 : 1,
                       surface.name());
}

bool hypotheses_met(const PropositionResult& r) {
  return std::all_of(r.hypotheses.begin(), r.hypotheses.end(), [](const Check& c) { return c.ok; });
}

void finalize(PropositionResult& r) {
  if (!hypotheses_met(r)) {
    r.conclusions.clear();
    r.evidence.clear();
    r.witness.clear();
    r.verdict = Verdict::HypothesisNotMet;
    return;
  }
  const bool ok = !r.conclusions.empty() &&
                  std::all_of(r.conclusions.begin(), r.conclusions.end(), [](const Check& c) { return c.ok; });
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
}

std::vector<double> column(const std::vector<SampleRow>& rows, double SampleRow::*field) {
  std::vector<double> out;
  for (const SampleRow& r : rows) {
    if (std::isfinite(r.*field)) out.push_back(r.*field);
  }
  return out;
}

double max_abs_or_inf(const ClassificationReport& rep) {
  if (rep.n_verdict == NVerdict::Undefined) return kInf;
  return rep.n_stats.max_abs;
}

/// Relative spread max|v - mean| / |mean|; infinite for an empty or
/// non-finite column.
double relative_spread(const std::vector<double>& v, std::size_t expected) {
  if (v.empty() || v.size() != expected) return kInf;
  const ConstancyStats st = constancy(v);
  if (st.mean == 0.0) return kInf;
  return st.max_dev / std::abs(st.mean);
}

void pick_witness(PropositionResult& r, const std::vector<std::pair<MemberEvidence, ClassificationReport>>& fam) {
  int best = -1;
  double worst = -1.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const MemberEvidence& m = fam[i].first;
    if (!m.built) continue;
    const double score = m.qualifies ? (std::isnan(m.residual) ? kInf : m.residual) : -0.5;
    if (best < 0 || score > worst) {
      best = static_cast<int>(i);
      worst = score;
    }
  }
  if (best >= 0) {
    r.witness = fam[best].first.name;
    r.evidence = fam[best].second.rows;
  }
}

void collect_members(PropositionResult& r, const std::vector<std::pair<MemberEvidence, ClassificationReport>>& fam) {
  for (const auto& [m, rep] : fam) {
    r.members.push_back(m);
    if (!m.built) r.notes.push_back(fmt::format("member '{}' not built: {}", m.name, m.note));
  }
}

std::string where_max_dev(const std::vector<SampleRow>& rows, double mean) {
  double worst = -1.0, at = 0.0;
  for (const SampleRow& r : rows) {
    const double d = std::abs(r.n_xi_direct - mean);
    if (d > worst) {
      worst = d;
      at = r.s;
    }
  }
  return fmt::format("largest deviation {:.3e} from the mean {:.6g} at s={:.6g}", worst, mean, at);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::HypothesisNotMet: return "hypothesis-not-met";
  }
  return "?";
}

Verdict parse_verdict(const std::string& text) {
  if (text == "pass") return Verdict::Pass;
  if (text == "fail") return Verdict::Fail;
  if (text == "hypothesis-not-met") return Verdict::HypothesisNotMet;
  fail(ErrorKind::ParseError, "unknown verdict '" + text + "'");
}

Check make_check(std::string name, double residual, double tol, std::string detail) {
  return {std::move(name), residual, tol, residual < tol, std::move(detail)};
}

Check logical_check(std::string name, int violations, std::string detail) {
  return make_check(std::move(name), violations, 0.5, std::move(detail));
}

double PropositionResult::max_conclusion_residual() const {
  double m = 0.0;
  for (const Check& c : conclusions) m = std::max(m, c.residual);
  return m;
}

double relative_std(const std::vector<double>& values) {
  if (values.empty()) return kInf;
  const ConstancyStats st = constancy(values);
  double var = 0.0;
  for (double v : values) var += (v - st.mean) * (v - st.mean);
  var /= static_cast<double>(values.size());
  if (st.mean == 0.0) return kInf;
  return std::sqrt(var) / std::abs(st.mean);
}

double ChoRatios::best_rel() const { return std::min(rel_plus, rel_minus); }

ChoRatios cho_ratios(const StructureParams& params, const std::vector<SampleRow>& rows) {
  std::vector<double> p, m, sp, sm;
  for (const SampleRow& r : rows) {
    if (!std::isfinite(r.kappa_tilde) || !std::isfinite(r.tau_tilde) || r.kappa_tilde <= 0.0) continue;
    p.push_back((r.tau_tilde + 1.0) / r.kappa_tilde);
    m.push_back((r.tau_tilde - 1.0) / r.kappa_tilde);
    sp.push_back(std::abs(r.tau_tilde + params.a1) / r.kappa_tilde);
    sm.push_back(std::abs(r.tau_tilde - params.a1) / r.kappa_tilde);
  }
  ChoRatios c;
  c.plus = constancy(p);
  c.minus = constancy(m);
  c.scaled_plus = constancy(sp);
  c.scaled_minus = constancy(sm);
  const bool complete = p.size() == rows.size();
  c.rel_plus = complete ? relative_std(p) : kInf;
  c.rel_minus = complete ? relative_std(m) : kInf;
  c.rel_scaled_plus = complete ? relative_std(sp) : kInf;
  c.rel_scaled_minus = complete ? relative_std(sm) : kInf;
  return c;
}

std::pair<double, double> linear_angle_legendre_lhs(const StructureParams& p, double K, double xi_norm, double e,
                                   double kappa) {
  const double c = p.c1 + p.d1;
  const double pre = p.c2 * (K - 1.0) / (2.0 * p.alpha * p.alpha * xi_norm * std::sqrt(c));
  const double a = -e / p.lambda, b = kappa * p.lambda / c;
  return {pre * (a + b), pre * (a - b)};
}

std::pair<double, double> linear_angle_slant_theta(const StructureParams& p, double K, double e, double kappa,
                                     double kappa_tilde, double c_bar) {
  const double c = p.c1 + p.d1, a2 = p.alpha * p.alpha;
  const double first = -e * (p.c2 * (K - 1.0) / (2.0 * a2 * p.lambda * std::sqrt(c)) + 1.0);
  const double second = kappa * p.lambda * p.c2 * (K - 1.0) / (2.0 * a2 * std::pow(c, 1.5));
  const double arg_p = c_bar * kappa_tilde / (first + second);
  const double arg_m = c_bar * kappa_tilde / (first - second);
  const bool ok_p = std::abs(arg_p) <= 1.0, ok_m = std::abs(arg_m) <= 1.0;
  if (!ok_p && !ok_m) {
    fail(ErrorKind::DomainViolation,
         fmt::format("arcsin arguments {:.6g} and {:.6g} lie outside [-1, 1]", arg_p, arg_m));
  }
  return {ok_p ? std::asin(arg_p) : kNaN, ok_m ? std::asin(arg_m) : kNaN};
}

std::vector<std::pair<MemberEvidence, ClassificationReport>> classify_family(
    const StructureParams& params, const SurfaceModel& surface, const std::vector<CurveSpec>& family,
    const VerifyOptions& opt) {
  std::vector<std::pair<MemberEvidence, ClassificationReport>> out(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    MemberEvidence& m = out[i].first;
    m.name = family[i].name.empty() ? fmt::format("member {}", i) : family[i].name;
    m.description = describe(family[i]);
    try {
      const LiftedCurve curve = build_curve(params, surface, family[i]);
      out[i].second = classify(params, curve, opt.classify_tol, opt.samples);
      m.built = true;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::ParseError) throw;
      m.note = e.what();
      return;
    }
    const ClassificationReport& rep = out[i].second;
    m.t_verdict = rep.t_verdict;
    m.n_verdict = rep.n_verdict;
    if (rep.n_verdict != NVerdict::Undefined) {
      m.max_abs_n = rep.n_stats.max_abs;
      m.n_mean = rep.n_stats.mean;
      m.n_dev = rep.n_stats.max_dev;
    } else {
      m.note = rep.n_error;
    }
  });
  return out;
}

PropositionResult verify_prop_31(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt) {
  PropositionResult r;
  r.id = "3.1";
  r.scenario = fmt::format("{} family of {} lifts on {}", r.id, family.size(), surface.name());
  r.hypotheses.push_back(param_check(params, opt));
  r.hypotheses.push_back(unit_curvature_check(surface, opt));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  auto fam = classify_family(params, surface, family, opt);
  int qualifying = 0;
  double worst = 0.0;
  for (auto& [m, rep] : fam) {
    if (!m.built) continue;
    m.qualifies = is_slant_or_legendre(rep.t_verdict);
    if (!m.qualifies) {
      m.note = "neither Legendre nor slant; excluded";
      continue;
    }
    ++qualifying;
    m.residual = max_abs_or_inf(rep);
    m.ok = m.residual < opt.zero_tol;
    m.metrics = {{"t_mean", rep.t_stats.mean}, {"t_max_dev", rep.t_stats.max_dev},
                 {"max_formula_gap", rep.max_formula_gap}};
    worst = std::max(worst, m.residual);
  }
  collect_members(r, fam);
  pick_witness(r, fam);
  r.conclusions.push_back(make_check("max |g1(N~,xi1)| over Legendre and slant members", worst,
                                     opt.zero_tol,
                                     fmt::format("{} of {} qualify", qualifying, family.size())));
  if (qualifying == 0) r.notes.push_back("no member is Legendre or slant; the conclusion holds vacuously");
  finalize(r);
  return r;
}

PropositionResult verify_prop_32(const StructureParams& params, const SurfaceModel& surface,
                                 const CurveSpec& curve, const VerifyOptions& opt) {
  PropositionResult r;
  r.id = "3.2";
  r.scenario = fmt::format("{} on {}", describe(curve), surface.name());
  r.hypotheses.push_back(param_check(params, opt));
  r.hypotheses.push_back(unit_curvature_check(surface, opt));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  auto fam = classify_family(params, surface, {curve}, opt);
  auto& [m, rep] = fam.front();
  if (!m.built) fail(ErrorKind::IntegrationFailure, "curve not built: " + m.note);
  r.hypotheses.push_back(logical_check("curve is not slant", is_slant_or_legendre(rep.t_verdict) ? 1 : 0,
                                       fmt::format("cos(theta) spread {:.3e}", rep.t_stats.max_dev)));
  m.qualifies = hypotheses_met(r);
  if (m.qualifies) {
    if (rep.n_verdict == NVerdict::Undefined) {
      r.conclusions.push_back(make_check("Frenet frame exists", kInf, opt.zero_tol, rep.n_error));
    } else if (rep.n_verdict == NVerdict::None) {
      r.conclusions.push_back(make_check("g1(N~,xi1) constant", rep.n_stats.max_dev, opt.classify_tol,
                                         where_max_dev(rep.rows, rep.n_stats.mean)));
    } else {
      const double c = rep.n_stats.mean;
      const std::vector<SampleRow>& rows = rep.rows;
      const std::size_t n = rows.size();
      const double h = n > 1 ? rows[1].s - rows[0].s : 0.0;
      double integral = 0.0, worst = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        const double f0 = rows[i - 1].kappa_tilde, f1 = rows[i].kappa_tilde;
        if (i == 1) {
          const double f2 = n > 2 ? rows[2].kappa_tilde : f1;
          integral += h * (5.0 * f0 + 8.0 * f1 - f2) / 12.0;
        } else {
          integral += h * (-rows[i - 2].kappa_tilde + 8.0 * f0 + 5.0 * f1) / 12.0;
        }
        const double lhs = rows[i].cos_theta_fp - rows[0].cos_theta_fp;
        worst = std::max(worst, std::abs(lhs - c * integral));
      }
      r.conclusions.push_back(make_check("cos(theta) - cos(theta0) = c int kappa~", worst, opt.zero_tol,
                                         fmt::format("c = {:.17g}", c)));
    }
    m.residual = r.max_conclusion_residual();
    m.ok = m.residual < opt.zero_tol;
  }
  collect_members(r, fam);
  pick_witness(r, fam);
  finalize(r);
  return r;
}

PropositionResult verify_prop_33(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt) {
  PropositionResult r;
  r.id = "3.3";
  r.scenario = fmt::format("{} family of {} lifts on {}", r.id, family.size(), surface.name());
  r.hypotheses.push_back(param_check(params, opt));
  r.hypotheses.push_back(sphere_check(surface));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  r.hypotheses.push_back(non_unit_curvature_check(surface, opt));
  const double K = 1.0 / (surface.radius() * surface.radius());
  r.hypotheses.push_back(make_check("K = a1^2", std::abs(K - params.a1 * params.a1), opt.curvature_tol,
                                    fmt::format("K={:.17g} a1={:.17g}", K, params.a1)));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  auto fam = classify_family(params, surface, family, opt);
  int qualifying = 0, bad_legendre = 0, bad_slant = 0;
  for (auto& [m, rep] : fam) {
    if (!m.built) continue;
    const std::vector<double> tau = column(rep.rows, &SampleRow::tau_tilde);
    double dev_plus = kInf, dev_minus = kInf;
    if (tau.size() == rep.rows.size()) {
      dev_plus = dev_minus = 0.0;
      for (double t : tau) {
        dev_plus = std::max(dev_plus, std::abs(t - K));
        dev_minus = std::max(dev_minus, std::abs(t + K));
      }
    }
    const std::vector<double> speed = column(rep.rows, &SampleRow::base_speed);
    const std::vector<double> kappa = column(rep.rows, &SampleRow::base_kappa);
    const double speed_dev = relative_spread(speed, rep.rows.size());
    const ConstancyStats ks = constancy(kappa);
    const bool geodesic = ks.max_abs < kGeodesicTol;
    const bool kconst = !geodesic && relative_spread(kappa, rep.rows.size()) < opt.rel_tol;
    const ChoRatios cho = cho_ratios(params, rep.rows);
    m.metrics = {{"tau_dev_plus_K", dev_plus},       {"tau_dev_minus_K", dev_minus},
                 {"base_speed_rel_dev", speed_dev},  {"base_kappa_mean", ks.mean},
                 {"base_kappa_max_dev", ks.max_dev}, {"cho_plus_mean", cho.plus.mean},
                 {"cho_plus_rel_std", cho.rel_plus}, {"cho_minus_mean", cho.minus.mean},
                 {"cho_minus_rel_std", cho.rel_minus}, {"cho_scaled_plus_rel_std", cho.rel_scaled_plus},
                 {"cho_scaled_minus_rel_std", cho.rel_scaled_minus}};
    const bool tau_ok = std::min(dev_plus, dev_minus) < opt.rel_tol;
    m.qualifies = is_slant(rep.t_verdict) && speed_dev < opt.speed_tol && tau_ok;
    if (!m.qualifies) {
      m.note = tau_ok ? "not a constant-speed slant lift; excluded" : "tau~ != +-K; excluded";
      continue;
    }
    ++qualifying;
    const int v1 = (rep.n_verdict == NVerdict::NLegendre) != geodesic ? 1 : 0;
    const int v2 = (rep.n_verdict == NVerdict::NSlant) != kconst ? 1 : 0;
    bad_legendre += v1;
    bad_slant += v2;
    m.residual = v1 + v2;
    m.ok = m.residual == 0;
    m.note = fmt::format("tau~ convention {}; base {}", dev_plus <= dev_minus ? "+K" : "-K",
                         geodesic ? "geodesic" : (kconst ? "constant curvature" : "varying curvature"));
  }
  r.hypotheses.push_back(logical_check("some member is slant with tau~ = +-K", qualifying == 0 ? 1 : 0,
                                       fmt::format("{} of {} qualify", qualifying, family.size())));
  collect_members(r, fam);
  pick_witness(r, fam);
  if (hypotheses_met(r)) {
    r.conclusions.push_back(logical_check("N-Legendre iff geodesic base", bad_legendre));
    r.conclusions.push_back(logical_check("N-slant iff nonzero constant base curvature", bad_slant));
  }
  finalize(r);
  return r;
}

PropositionResult verify_prop_34(const StructureParams& params, const SurfaceModel& surface,
                                 const std::vector<CurveSpec>& family, const VerifyOptions& opt) {
  PropositionResult r;
  r.id = "3.4";
  r.scenario = fmt::format("{} family of {} lifts on {}", r.id, family.size(), surface.name());
  r.hypotheses.push_back(param_check(params, opt));
  r.hypotheses.push_back(non_unit_curvature_check(surface, opt));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  auto fam = classify_family(params, surface, family, opt);
  int qualifying = 0, geodesics = 0, mismatches = 0;
  double geodesic_worst = 0.0;
  for (auto& [m, rep] : fam) {
    if (!m.built) continue;
    const std::vector<double> speed = column(rep.rows, &SampleRow::base_speed);
    const double speed_dev = relative_spread(speed, rep.rows.size());
    m.qualifies = is_slant(rep.t_verdict) && speed_dev < opt.speed_tol;
    if (!m.qualifies) {
      m.note = "not a constant-speed slant lift; excluded";
      continue;
    }
    ++qualifying;
    const ConstancyStats ks = constancy(column(rep.rows, &SampleRow::base_kappa));
    const bool geodesic = ks.max_abs < kGeodesicTol;
    std::vector<double> q;
    for (const SampleRow& row : rep.rows) {
      const double v = (row.gauss_K - 1.0) * row.base_kappa / row.kappa_tilde;
      if (std::isfinite(v)) q.push_back(v);
    }
    const double q_spread = relative_spread(q, rep.rows.size());
    const ConstancyStats qs = constancy(q);
    m.metrics = {{"base_speed_rel_dev", speed_dev}, {"base_kappa_mean", ks.mean},
                 {"q_mean", qs.mean},               {"q_rel_dev", q_spread}};
    if (geodesic) {
      ++geodesics;
      m.residual = max_abs_or_inf(rep);
      m.ok = m.residual < opt.zero_tol;
      geodesic_worst = std::max(geodesic_worst, m.residual);
      m.note = "geodesic base";
    } else {
      const bool qconst = q_spread < opt.rel_tol && std::abs(qs.mean) > 0.0;
      const int v = (rep.n_verdict == NVerdict::NSlant) != qconst ? 1 : 0;
      mismatches += v;
      m.residual = v;
      m.ok = v == 0;
      m.note = fmt::format("(K-1) kappa / kappa~ {}", qconst ? "constant" : "not constant");
    }
  }
  r.hypotheses.push_back(logical_check("some member is a constant-speed slant lift", qualifying == 0 ? 1 : 0,
                                       fmt::format("{} of {} qualify", qualifying, family.size())));
  collect_members(r, fam);
  pick_witness(r, fam);
  if (hypotheses_met(r)) {
    if (geodesics > 0) {
      r.conclusions.push_back(
          make_check("geodesic base gives N-Legendre (max |g1(N~,xi1)|)", geodesic_worst, opt.zero_tol));
    }
    if (qualifying > geodesics) {
      r.conclusions.push_back(logical_check("N-slant iff (K-1) kappa / kappa~ nonzero constant", mismatches));
    }
  }
  finalize(r);
  return r;
}

PropositionResult verify_prop_36(const StructureParams& params, const SurfaceModel& surface,
                                 const CurveSpec& curve, const VerifyOptions& opt) {
  PropositionResult r;
  r.id = "3.6";
  r.scenario = fmt::format("{} on {}", describe(curve), surface.name());
  r.hypotheses.push_back(sphere_check(surface));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  r.hypotheses.push_back(non_unit_curvature_check(surface, opt));
  if (!hypotheses_met(r)) {
    finalize(r);
    return r;
  }
  auto fam = classify_family(params, surface, {curve}, opt);
  auto& [m, rep] = fam.front();
  if (!m.built) fail(ErrorKind::IntegrationFailure, "curve not built: " + m.note);
  const std::vector<SampleRow>& rows = rep.rows;
  const double r_star = 2.0 * params.lambda / (params.c1 + params.d1);
  double speed_dev = 0.0;
  for (const SampleRow& row : rows) speed_dev = std::max(speed_dev, std::abs(row.base_speed - r_star));
  r.hypotheses.push_back(make_check("base speed = 2 lambda / (c1 + d1)", speed_dev, opt.speed_tol,
                                    fmt::format("target {:.17g}", r_star)));

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const SampleRow& row : rows) {
    sx += row.s;
    sy += row.theta;
    sxx += row.s * row.s;
    sxy += row.s * row.theta;
  }
  const double e = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double f = (sy - e * sx) / n;
  double lin_dev = 0.0;
  for (const SampleRow& row : rows) lin_dev = std::max(lin_dev, std::abs(row.theta - (e * row.s + f)));
  r.hypotheses.push_back(make_check("theta linear", lin_dev, opt.linear_tol,
                                    fmt::format("e={:.17g} f={:.17g}", e, f)));
  r.hypotheses.push_back(logical_check("curve is not slant (e != 0)",
                                       std::abs(e) < 1e-6 || is_slant_or_legendre(rep.t_verdict) ? 1 : 0));
  m.metrics = {{"e", e}, {"f", f}, {"speed_dev", speed_dev}, {"theta_linear_dev", lin_dev}};
  m.qualifies = hypotheses_met(r);

  if (m.qualifies) {
    const LocalGeometry loc = local_geometry(surface, chart_bundle_point(surface, Vec3(kPi / 2, 0.0, 0.0)));
    const double xin = xi_norm(params, loc);
    double r14 = kInf;
    {
      double wp = 0.0, wm = 0.0;
      for (const SampleRow& row : rows) {
        const auto [lp, lm] = linear_angle_legendre_lhs(params, row.gauss_K, xin, e, row.base_kappa);
        wp = std::max(wp, std::abs(lp - e));
        wm = std::max(wm, std::abs(lm - e));
      }
      r14 = std::min(wp, wm);
    }
    m.metrics.emplace_back("legendre_condition_residual", r14);
    if (rep.n_verdict == NVerdict::Undefined) {
      r.conclusions.push_back(make_check("Frenet frame exists", kInf, opt.zero_tol, rep.n_error));
    } else if (rep.n_verdict == NVerdict::NLegendre) {
      r.conclusions.push_back(make_check("linear-angle N-Legendre condition holds", r14, opt.rel_tol));
    } else if (rep.n_verdict == NVerdict::NSlant) {
      const double cbar = rep.n_stats.mean;
      try {
        double wp = 0.0, wm = 0.0;
        for (const SampleRow& row : rows) {
          const auto [tp, tm] = linear_angle_slant_theta(params, row.gauss_K, e, row.base_kappa, row.kappa_tilde, cbar);
          auto gap = [&](double t) {
            return std::isnan(t) ? kInf : std::min(std::abs(row.theta - t), std::abs(row.theta - (kPi - t)));
          };
          wp = std::max(wp, gap(tp));
          wm = std::max(wm, gap(tm));
        }
        r.conclusions.push_back(make_check("linear-angle N-slant angle formula holds", std::min(wp, wm),
                                           opt.rel_tol, fmt::format("c_bar = {:.17g}", cbar)));
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::DomainViolation) throw;
        r.conclusions.push_back(make_check("linear-angle N-slant angle formula holds", kInf, opt.rel_tol, err.what()));
      }
    } else {
      r.conclusions.push_back(logical_check("linear-angle N-Legendre condition fails off N-Legendre",
                                            r14 < opt.rel_tol ? 1 : 0,
                                            fmt::format("condition residual {:.6g}", r14)));
    }
    m.residual = r.max_conclusion_residual();
    m.ok = std::all_of(r.conclusions.begin(), r.conclusions.end(), [](const Check& c) { return c.ok; });
  }
  collect_members(r, fam);
  pick_witness(r, fam);
  finalize(r);
  return r;
}

}  // namespace utb
