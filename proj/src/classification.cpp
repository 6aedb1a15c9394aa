#include "utb/classification.hpp"

#include "utb/errors.hpp"
#include "utb/finite_difference.hpp"
#include "utb/parallel.hpp"

#include <cmath>
#include <limits>

namespace utb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamp_cos(double c) {
  if (std::abs(c) > 1.0 + 1e-10) {
    fail(ErrorKind::InvariantViolation, "|cos theta| = " + std::to_string(std::abs(c)) + " exceeds 1");
  }
  return std::clamp(c, -1.0, 1.0);
}

double max_abs_finite(double acc, double v) { return std::isfinite(v) ? std::max(acc, std::abs(v)) : acc; }

}  // namespace

double xi_norm(const StructureParams& params, const LocalGeometry& loc) {
  const ContactTensors ct = contact_tensors(params, loc);
  return g1_norm(params, loc, ct.xi);
}

double cos_theta_fp(const StructureParams& params, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  const BundleTangent t{st.e, loc.proj(st.w)};
  const ContactTensors ct = contact_tensors(params, loc);
  return clamp_cos(g1(params, loc, t, ct.xi) / (g1_norm(params, loc, t) * g1_norm(params, loc, ct.xi)));
}

double cos_theta_paper(const StructureParams& params, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const Mat2 g = curve.surface().metric(st.point.x);
  return std::sqrt(params.c1 + params.d1) * inner(g, st.e, st.point.u);
}

double dcos_theta(const StructureParams& params, const LiftedCurve& curve, double s) {
  return fd::first([&](double t) { return cos_theta_fp(params, curve, t); }, s, fd::curve_step(s),
                   curve.s0(), curve.s1());
}

double t_xi_product(const StructureParams& params, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  const BundleTangent t{st.e, loc.proj(st.w)};
  const ContactTensors ct = contact_tensors(params, loc);
  return g1(params, loc, t, ct.xi) / g1_norm(params, loc, t);
}

AngleProfile angle_profile(const StructureParams& params, const LiftedCurve& curve, int samples) {
  const std::vector<double> grid = sample_grid(curve.s0(), curve.s1(), samples);
  AngleProfile prof;
  prof.samples.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    AngleSample& a = prof.samples[i];
    a.s = grid[i];
    a.cos_fp = cos_theta_fp(params, curve, a.s);
    a.cos_paper = cos_theta_paper(params, curve, a.s);
    a.theta = std::acos(a.cos_fp);
    const double sn = std::sin(a.theta);
    if (sn > 1e-3) {
      a.dtheta = -dcos_theta(params, curve, a.s) / sn;
    } else {
      a.dtheta = fd::first([&](double t) { return std::acos(cos_theta_fp(params, curve, t)); }, a.s,
                           fd::curve_step(a.s), curve.s0(), curve.s1());
    }
  });
  std::vector<double> c;
  for (const AngleSample& a : prof.samples) {
    c.push_back(a.cos_fp);
    prof.max_column_gap = std::max(prof.max_column_gap, std::abs(a.cos_fp - a.cos_paper));
  }
  const ConstancyStats st = constancy(c);
  prof.mean = st.mean;
  prof.max_dev = st.max_dev;
  prof.columns_agree = prof.max_column_gap < 1e-8;
  return prof;
}

std::vector<double> n_xi_direct(const StructureParams& params, const LiftedCurve& curve, int samples) {
  const std::vector<double> grid = sample_grid(curve.s0(), curve.s1(), samples);
  std::vector<double> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const FrenetPoint f = frenet_at(params, curve, grid[i]);
    const LocalGeometry loc = local_at(curve, grid[i]);
    out[i] = g1(params, loc, f.N, contact_tensors(params, loc).xi);
  });
  return out;
}

DecompositionData beta_of(const StructureParams& p, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const Mat2 g = curve.surface().metric(st.point.x);
  const Vec2& x = st.point.u;
  const double c = p.c1 + p.d1, sc = std::sqrt(c);
  DecompositionData d;
  d.s = s;
  d.r = st.frenet.speed;
  d.kappa = st.frenet.kappa;
  const double cth = cos_theta_fp(p, curve, s);
  d.coef_t = p.lambda * cth / (d.r * sc);
  const double lam = p.lambda / sc;
  double rad = d.r * d.r - lam * lam * cth * cth;
  if (rad < 0.0) {
    if (rad < -1e-12 * std::max(1.0, d.r * d.r)) {
      fail(ErrorKind::NegativeRadicand,
           "r^2 - (lambda/sqrt(c1+d1))^2 cos^2 theta = " + std::to_string(rad) + " at s=" + std::to_string(s));
    }
    rad = 0.0;
  }
  d.beta_plus = std::sqrt(rad) / d.r;
  d.beta_minus = -d.beta_plus;
  const double tx = inner(g, st.frenet.t, x);
  d.beta_fp = inner(g, st.frenet.n, x);
  d.beta_fp_abs = std::sqrt(std::max(0.0, 1.0 - tx * tx));
  d.unit_residual = tx * tx + d.beta_fp * d.beta_fp - 1.0;
  d.branch = d.beta_fp >= 0.0 ? 1 : -1;

  const double wn2 = inner(g, st.w, st.w);
  auto a_of = [&](double t) {
    const LiftState q = curve.state(t);
    return cos_theta_paper(p, curve, t) / (q.frenet.speed * sc);
  };
  const double da = fd::first(a_of, s, fd::curve_step(s), curve.s0(), curve.s1());
  const double cp = cos_theta_paper(p, curve, s);
  d.e_coefs[0] = cp / sc;
  if (wn2 > 1e-16) {
    d.e_coefs[1] = d.r * (da - d.r * d.beta_fp * d.kappa) / wn2;
    const Vec2 rec = d.e_coefs[0] * x + d.e_coefs[1] * st.w;
    d.e_reconstruction = (rec - st.e).cwiseAbs().maxCoeff();
  } else {
    d.e_coefs[1] = 0.0;
    d.e_reconstruction = kNaN;
  }
  return d;
}

CurvatureTerm curvature_term(const StructureParams& p, const LiftedCurve& curve, double s) {
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  const Vec2& x = st.point.u;
  CurvatureTerm ct;
  ct.direct = loc.ip(loc.curv(st.e, x, x), st.w);
  const double sc = std::sqrt(p.c1 + p.d1);
  auto a_of = [&](double t) {
    return cos_theta_paper(p, curve, t) / (curve.state(t).frenet.speed * sc);
  };
  const double da = fd::first(a_of, s, fd::curve_step(s), curve.s0(), curve.s1());
  const double beta = loc.ip(st.frenet.n, x);
  const double r = st.frenet.speed;
  ct.printed_form = r * (da - r * beta * st.frenet.kappa) * loc.K;
  return ct;
}

namespace {

FormulaSample formula_at(const StructureParams& p, const LiftedCurve& curve, double s) {
  FormulaSample fs;
  fs.s = s;
  const FrenetPoint f = frenet_at(p, curve, s);
  const LiftState st = curve.state(s);
  const LocalGeometry loc = local_geometry(curve.surface(), st.point);
  const double xin = xi_norm(p, loc);
  fs.kappa_tilde = f.kappa;
  fs.tau_tilde = f.tau;
  fs.n_direct = g1(p, loc, f.N, contact_tensors(p, loc).xi);

  const double c = p.c1 + p.d1, sc = std::sqrt(c);
  const double r = st.frenet.speed, kappa = st.frenet.kappa, K = loc.K;
  const double cth = cos_theta_fp(p, curve, s);
  const double dcos = dcos_theta(p, curve, s);
  auto a_of = [&](double t) {
    return cos_theta_fp(p, curve, t) / (curve.state(t).frenet.speed * sc);
  };
  const double da = fd::first(a_of, s, fd::curve_step(s), curve.s0(), curve.s1());
  const double lam = p.lambda / sc;
  const double rad = r * r - lam * lam * cth * cth;
  const double a2 = p.alpha * p.alpha;
  const double tail = xin * dcos / f.kappa;  // -|xi| theta' sin(theta) / kappa~

  try {
    fs.decomposition = beta_of(p, curve, s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NegativeRadicand) throw;
    fs.decomposition.beta_plus = fs.decomposition.beta_minus = kNaN;
  }
  const double sq = rad >= -1e-12 * std::max(1.0, r * r) ? std::sqrt(std::max(rad, 0.0)) : kNaN;
  const double pref = r * (p.c2 * K - c) / (2.0 * p.lambda * a2 * f.kappa);
  fs.plus = pref * (da + kappa * sq) + tail;
  fs.minus = pref * (da - kappa * sq) + tail;
  fs.printed_plus = pref * (da + r * kappa * sq) + tail;
  fs.printed_minus = pref * (da - r * kappa * sq) + tail;
  // The true factor is (a' - r beta kappa) with r beta = branch * sq.
  const double beta_fp = inner(loc.g, st.frenet.n, st.point.u);
  fs.decomposition.beta_fp = beta_fp;
  fs.matching = beta_fp >= 0.0 ? fs.minus : fs.plus;

  const double rterm = loc.ip(loc.curv(st.e, st.point.u, st.point.u), st.w);
  fs.intermediate = (p.c2 * rterm - c * loc.ip(st.e, st.w)) / (2.0 * p.lambda * a2 * f.kappa) + tail;
  return fs;
}

}  // namespace

std::vector<FormulaSample> n_xi_formula(const StructureParams& params, const LiftedCurve& curve,
                                        int samples) {
  const std::vector<double> grid = sample_grid(curve.s0(), curve.s1(), samples);
  std::vector<FormulaSample> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = formula_at(params, curve, grid[i]); });
  return out;
}

std::string to_string(TVerdict v) {
  switch (v) {
    case TVerdict::Legendre: return "Legendre";
    case TVerdict::Slant: return "slant";
    case TVerdict::None: return "none";
  }
  return "?";
}

std::string to_string(NVerdict v) {
  switch (v) {
    case NVerdict::NLegendre: return "N-Legendre";
    case NVerdict::NSlant: return "N-slant";
    case NVerdict::None: return "none";
    case NVerdict::Undefined: return "undefined";
  }
  return "?";
}

ConstancyStats constancy(const std::vector<double>& values) {
  ConstancyStats st;
  if (values.empty()) return st;
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(values.size());
  for (double v : values) {
    st.max_dev = std::max(st.max_dev, std::abs(v - st.mean));
    st.max_abs = std::max(st.max_abs, std::abs(v));
  }
  return st;
}

TVerdict t_verdict_of(const ConstancyStats& st, double tol) {
  if (!(st.max_dev < tol)) return TVerdict::None;
  return std::abs(st.mean) < tol ? TVerdict::Legendre : TVerdict::Slant;
}

NVerdict n_verdict_of(const ConstancyStats& st, double tol) {
  if (!(st.max_dev < tol)) return NVerdict::None;
  return std::abs(st.mean) < tol ? NVerdict::NLegendre : NVerdict::NSlant;
}

std::vector<std::string> normalization_gaps(const StructureParams& p) {
  std::vector<std::string> gaps;
  if (std::abs(p.alpha - 1.0) > 1e-12) {
    gaps.push_back("alpha != 1: the closed-form cos(theta) = sqrt(c1+d1) g(E,X) differs from "
                   "the first-principles value (c1+d1)/(2 lambda) g(E,X)");
  }
  if (std::abs(p.lambda - 1.0) > 1e-12) {
    gaps.push_back("lambda != 1: the T-coefficient lambda cos(theta)/(r sqrt(c1+d1)) of X is "
                   "inconsistent with g(E,X) = cos(theta)/sqrt(c1+d1)");
  }
  if (p.d1 != 0.0) {
    gaps.push_back("d1 != 0: the closed forms use the prefactor c2 K - (c1+d1); the connection "
                   "gives c2 K - c1");
  }
  return gaps;
}

ClassificationReport classify(const StructureParams& params, const LiftedCurve& curve, double tol,
                              int samples) {
  const std::vector<double> grid = sample_grid(curve.s0(), curve.s1(), samples);
  ClassificationReport rep;
  rep.tol = tol;
  rep.rows.resize(grid.size());
  std::vector<std::string> errors(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    SampleRow& row = rep.rows[i];
    const double s = grid[i];
    row.s = s;
    row.cos_theta_fp = cos_theta_fp(params, curve, s);
    row.cos_theta_paper = cos_theta_paper(params, curve, s);
    row.t_xi = t_xi_product(params, curve, s);
    row.theta = std::acos(row.cos_theta_fp);
    const double dcos = dcos_theta(params, curve, s);
    row.dtheta = std::sin(row.theta) > 1e-3 ? -dcos / std::sin(row.theta) : kNaN;
    const LiftState st = curve.state(s);
    row.base_kappa = st.frenet.kappa;
    row.base_speed = st.frenet.speed;
    row.gauss_K = gauss_curvature(curve.surface(), st.point.x);
    row.beta_fp = inner(curve.surface().metric(st.point.x), st.frenet.n, st.point.u);
    try {
      const DecompositionData d = beta_of(params, curve, s);
      row.beta_paper = d.branch > 0 ? d.beta_plus : d.beta_minus;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NegativeRadicand) throw;
      row.beta_paper = kNaN;
    }
    try {
      const FormulaSample fs = formula_at(params, curve, s);
      row.kappa_tilde = fs.kappa_tilde;
      row.tau_tilde = fs.tau_tilde;
      row.n_xi_direct = fs.n_direct;
      row.n_xi_formula_plus = fs.plus;
      row.n_xi_formula_minus = fs.minus;
      row.n_xi_matching = fs.matching;
      row.n_xi_printed = row.beta_fp >= 0.0 ? fs.printed_minus : fs.printed_plus;
      row.n_xi_intermediate = fs.intermediate;
      const FrenetPoint f = frenet_at(params, curve, s);
      row.frenet_residual = f.residual[1];
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::VanishingCurvature) throw;
      errors[i] = e.what();
      row.kappa_tilde = row.tau_tilde = row.n_xi_direct = kNaN;
      row.n_xi_formula_plus = row.n_xi_formula_minus = kNaN;
      row.n_xi_matching = row.n_xi_printed = row.n_xi_intermediate = kNaN;
      row.frenet_residual = kNaN;
    }
  });

  std::vector<double> t, n;
  bool n_ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SampleRow& row = rep.rows[i];
    t.push_back(row.t_xi);
    if (!errors[i].empty()) {
      if (n_ok) rep.n_error = errors[i];
      n_ok = false;
      continue;
    }
    n.push_back(row.n_xi_direct);
    rep.max_formula_gap = max_abs_finite(rep.max_formula_gap, row.n_xi_direct - row.n_xi_matching);
    rep.max_printed_gap = max_abs_finite(rep.max_printed_gap, row.n_xi_direct - row.n_xi_printed);
    rep.max_intermediate_gap = max_abs_finite(rep.max_intermediate_gap, row.n_xi_direct - row.n_xi_intermediate);
    rep.max_frenet_residual = max_abs_finite(rep.max_frenet_residual, row.frenet_residual);
  }
  for (const SampleRow& row : rep.rows) {
    rep.max_cos_gap = max_abs_finite(rep.max_cos_gap, row.cos_theta_fp - row.cos_theta_paper);
    rep.max_beta_gap = max_abs_finite(rep.max_beta_gap, row.beta_paper - row.beta_fp);
  }
  rep.t_stats = constancy(t);
  rep.t_verdict = t_verdict_of(rep.t_stats, tol);
  if (rep.t_verdict == TVerdict::Slant) rep.slant_constant = rep.t_stats.mean;
  if (n_ok) {
    rep.n_stats = constancy(n);
    rep.n_verdict = n_verdict_of(rep.n_stats, tol);
    if (rep.n_verdict == NVerdict::NSlant) rep.n_slant_constant = rep.n_stats.mean;
  } else {
    rep.n_verdict = NVerdict::Undefined;
    rep.warnings.push_back("Frenet frame undefined: " + rep.n_error);
  }
  for (const std::string& g : normalization_gaps(params)) rep.warnings.push_back(g);
  if (rep.max_cos_gap > 1e-8) {
    rep.warnings.push_back("cos_theta_fp and cos_theta_paper differ (max " +
                           std::to_string(rep.max_cos_gap) + ")");
  }
  if (!std::isfinite(rep.max_beta_gap) ||
      std::any_of(rep.rows.begin(), rep.rows.end(), [](const SampleRow& r) { return std::isnan(r.beta_paper); })) {
    rep.warnings.push_back("beta radicand negative at some samples (closed-form beta undefined)");
  }
  for (const std::string& w : curve.warnings()) rep.warnings.push_back(w);
  return rep;
}

}  // namespace utb
