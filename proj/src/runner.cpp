#include "utb/runner.hpp"

#include "utb/errors.hpp"
#include "utb/numerics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <random>

namespace utb {

using nlohmann::json;

namespace {

json structure_json(const StructureParams& p) {
  return {{"c1", p.c1},         {"c2", p.c2},         {"d1", p.d1},       {"lambda", p.lambda},
          {"a1", p.a1},         {"a2", p.a2},         {"b1", p.b1},       {"b2", p.b2},
          {"alpha", p.alpha},   {"phi_compatible", p.phi_compatible}};
}

json header(const RunConfig& cfg, const std::string& command, const StructureParams& p) {
  return {{"tool", "utb"},
          {"command", command},
          {"config", to_json(cfg)},
          {"config_hash", config_hash(cfg)},
          {"structure", structure_json(p)}};
}

std::string fmt6(double v) { return std::isfinite(v) ? fmt::format("{:.6g}", v) : format_number(v); }

std::string report_header(const RunConfig& cfg, const std::string& title, const StructureParams& p) {
  std::string out = title + "\n";
  out += fmt::format("config hash: {}\n", config_hash(cfg));
  out += fmt::format("structure: c1={} c2={} d1={} lambda={} a1={} b1={} alpha={}{}\n", fmt6(p.c1), fmt6(p.c2),
                     fmt6(p.d1), fmt6(p.lambda), fmt6(p.a1), fmt6(p.b1), fmt6(p.alpha),
                     p.phi_compatible ? "" : " (phi1 not g1-compatible)");
  out += "surface: " + cfg.surface.kind;
  if (cfg.surface.kind == "sphere") out += " radius " + fmt6(cfg.surface.radius);
  if (cfg.surface.kind == "custom") {
    out += fmt::format(" g11={} g12={} g22={}", cfg.surface.g11, cfg.surface.g12, cfg.surface.g22);
  }
  out += "\n";
  return out;
}

std::string maxima_text(const json& m) {
  std::string out;
  auto line = [&](const std::string& name, const json& v) {
    out += fmt::format("  {:<22} {}\n", name, v.is_number() ? fmt6(v.get<double>()) : std::string("undefined"));
  };
  line("t_xi mean", m["t_xi"]["mean"]);
  line("t_xi max deviation", m["t_xi"]["max_dev"]);
  if (m["n_xi"].is_null()) {
    line("n_xi max deviation", nullptr);
  } else {
    line("n_xi mean", m["n_xi"]["mean"]);
    line("n_xi max deviation", m["n_xi"]["max_dev"]);
  }
  line("formula gap", m["formula_gap"]);
  line("cos theta gap", m["cos_theta_gap"]);
  line("beta gap", m["beta_gap"]);
  return out;
}

std::string warnings_text(const std::vector<std::string>& warnings) {
  std::string out;
  if (warnings.empty()) return out;
  out += "warnings:\n";
  for (const std::string& w : warnings) out += "  - " + w + "\n";
  return out;
}

json check_json(const Check& c) {
  return {{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"ok", c.ok}, {"detail", c.detail}};
}

std::string check_text(const Check& c) {
  std::string out = fmt::format("  [{}] {}: residual {} (tol {})", c.ok ? "ok" : "no", c.name, fmt6(c.residual),
                                fmt6(c.tol));
  if (!c.detail.empty()) out += ", " + c.detail;
  return out + "\n";
}

json member_json(const MemberEvidence& m) {
  json metrics = json::object();
  for (const auto& [k, v] : m.metrics) metrics[k] = v;
  return {{"name", m.name},
          {"description", m.description},
          {"built", m.built},
          {"qualifies", m.qualifies},
          {"t_verdict", to_string(m.t_verdict)},
          {"n_verdict", to_string(m.n_verdict)},
          {"max_abs_n", m.max_abs_n},
          {"n_mean", m.n_mean},
          {"n_dev", m.n_dev},
          {"residual", m.residual},
          {"ok", m.ok},
          {"metrics", metrics},
          {"note", m.note}};
}

double max_residual(const std::vector<Check>& checks) {
  double r = 0.0;
  for (const Check& c : checks) r = std::max(r, c.residual);
  return r;
}

std::vector<CurveSpec> family_or(const RunConfig& cfg, std::vector<CurveSpec> builtin) {
  if (!cfg.family.empty()) return cfg.family;
  if (cfg.curve) return {*cfg.curve};
  return builtin;
}

CurveSpec curve_or(const RunConfig& cfg, CurveSpec builtin, const std::string& id) {
  if (cfg.curve) return *cfg.curve;
  if (cfg.family.size() == 1) return cfg.family.front();
  if (!cfg.family.empty()) fail(ErrorKind::ValidationError, "family: proposition " + id + " takes a single curve");
  return builtin;
}

}  // namespace

RunSummary run_classify(const RunConfig& cfg) {
  if (!cfg.curve) fail(ErrorKind::ValidationError, "curve: required for classify");
  const StructureParams params = structure_params(cfg);
  const NumericsScope scope(numerics_settings(cfg));
  const SurfaceModel surface = build_surface(cfg.surface);
  const LiftedCurve curve = build_curve(params, surface, *cfg.curve);
  const ClassificationReport rep = classify(params, curve, cfg.run.tolerances.classify, cfg.run.samples);

  RunSummary out;
  out.command = "classify";
  out.samples = rep.rows;
  out.exit_code = kExitPass;

  json doc = header(cfg, "classify", params);
  doc["curve"] = describe(*cfg.curve);
  doc["verdicts"] = {{"t_verdict", to_string(rep.t_verdict)}, {"n_verdict", to_string(rep.n_verdict)}};
  doc["residual_maxima"] = evidence_maxima(rep.rows);
  doc["diagnostics"] = {{"printed_formula_gap", rep.max_printed_gap},
                        {"intermediate_gap", rep.max_intermediate_gap},
                        {"frenet_residual", rep.max_frenet_residual},
                        {"unit_residual", rep.max_unit_residual}};
  doc["tolerance"] = rep.tol;
  doc["samples"] = rep.rows.size();
  if (!rep.n_error.empty()) doc["n_error"] = rep.n_error;
  doc["warnings"] = rep.warnings;
  out.document = std::move(doc);

  std::string txt = report_header(cfg, "utb classify", params);
  txt += "curve: " + describe(*cfg.curve) + "\n";
  txt += fmt::format("samples: {}, tolerance {}\n", rep.rows.size(), fmt6(rep.tol));
  txt += "T-verdict: " + to_string(rep.t_verdict);
  if (rep.t_verdict == TVerdict::Slant) txt += fmt::format(" (g1(T~, xi1) = {})", fmt6(rep.slant_constant));
  txt += "\nN-verdict: " + to_string(rep.n_verdict);
  if (rep.n_verdict == NVerdict::NSlant) txt += fmt::format(" (g1(N~, xi1) = {})", fmt6(rep.n_slant_constant));
  if (!rep.n_error.empty()) txt += " (" + rep.n_error + ")";
  txt += "\nresidual maxima:\n" + maxima_text(out.document["residual_maxima"]);
  txt += fmt::format("diagnostics:\n  {:<22} {}\n  {:<22} {}\n  {:<22} {}\n", "printed formula gap",
                     fmt6(rep.max_printed_gap), "intermediate gap", fmt6(rep.max_intermediate_gap),
                     "frenet residual", fmt6(rep.max_frenet_residual));
  txt += warnings_text(rep.warnings);
  out.report = std::move(txt);
  return out;
}

RunSummary run_verify(const RunConfig& cfg, const std::string& id) {
  const StructureParams params = structure_params(cfg);
  const NumericsScope scope(numerics_settings(cfg));
  const SurfaceModel surface = build_surface(cfg.surface);
  const VerifyOptions opt = verify_options(cfg);

  PropositionResult r;
  if (id == "3.1") {
    r = verify_prop_31(params, surface, family_or(cfg, prop31_family(params)), opt);
  } else if (id == "3.2") {
    r = verify_prop_32(params, surface, curve_or(cfg, prop32_curve(), id), opt);
  } else if (id == "3.3") {
    const bool builtin = cfg.family.empty() && !cfg.curve;
    r = verify_prop_33(params, surface,
                       builtin ? prop33_family(params, surface) : family_or(cfg, {}), opt);
  } else if (id == "3.4") {
    r = verify_prop_34(params, surface, family_or(cfg, prop34_family(cfg.surface)), opt);
  } else if (id == "3.6") {
    r = verify_prop_36(params, surface, curve_or(cfg, prop36_curve(params), id), opt);
  } else {
    fail(ErrorKind::ValidationError, "prop: must be one of 3.1, 3.2, 3.3, 3.4, 3.6, got '" + id + "'");
  }

  RunSummary out;
  out.command = "verify";
  out.exit_code = exit_code_for(r.verdict);
  out.emit_samples = r.verdict != Verdict::HypothesisNotMet && !r.evidence.empty();
  out.samples = r.evidence;

  json doc = header(cfg, "verify", params);
  doc["proposition"] = id;
  doc["scenario"] = r.scenario;
  doc["verdicts"] = {{id, to_string(r.verdict)}};
  json maxima = {{"hypotheses", max_residual(r.hypotheses)}, {"conclusions", r.max_conclusion_residual()}};
  if (out.emit_samples) maxima["evidence"] = evidence_maxima(r.evidence);
  doc["residual_maxima"] = std::move(maxima);
  json hyp = json::array(), con = json::array(), mem = json::array();
  for (const Check& c : r.hypotheses) hyp.push_back(check_json(c));
  for (const Check& c : r.conclusions) con.push_back(check_json(c));
  for (const MemberEvidence& m : r.members) mem.push_back(member_json(m));
  doc["hypotheses"] = std::move(hyp);
  doc["conclusions"] = std::move(con);
  doc["members"] = std::move(mem);
  doc["witness"] = out.emit_samples ? json(r.witness) : json(nullptr);
  doc["notes"] = r.notes;
  doc["warnings"] = normalization_gaps(params);
  out.document = std::move(doc);

  std::string txt = report_header(cfg, "utb verify " + id, params);
  txt += "scenario: " + r.scenario + "\n";
  txt += "verdict: " + to_string(r.verdict) + "\n";
  txt += "hypotheses:\n";
  for (const Check& c : r.hypotheses) txt += check_text(c);
  if (!r.conclusions.empty()) {
    txt += "conclusions:\n";
    for (const Check& c : r.conclusions) txt += check_text(c);
  }
  if (!r.members.empty()) {
    txt += "members:\n";
    for (const MemberEvidence& m : r.members) {
      txt += fmt::format("  {}: T {}, N {}, max|n| {}, {}{}\n", m.name, to_string(m.t_verdict),
                         to_string(m.n_verdict), fmt6(m.max_abs_n),
                         !m.qualifies ? "excluded" : (m.ok ? "consistent" : "inconsistent"),
                         m.note.empty() ? "" : " (" + m.note + ")");
    }
  }
  if (out.emit_samples) {
    txt += "evidence: " + r.witness + " in samples.csv\n";
    txt += "residual maxima of the evidence:\n" + maxima_text(out.document["residual_maxima"]["evidence"]);
  } else {
    txt += "evidence: none written\n";
  }
  if (!r.notes.empty()) {
    txt += "notes:\n";
    for (const std::string& n : r.notes) txt += "  - " + n + "\n";
  }
  txt += warnings_text(normalization_gaps(params));
  out.report = std::move(txt);
  return out;
}

namespace {

Vec3 random_chart_point(const SurfaceModel& surface, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const ChartDomain dom = surface.domain();
  auto coord = [&](double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) return 2.0 * unit(rng);
    const double m = 0.1 * (hi - lo);
    return lo + m + (hi - lo - 2.0 * m) * 0.5 * (unit(rng) + 1.0);
  };
  const double x1 = coord(dom.lo1, dom.hi1);
  const double x2 = coord(dom.lo2, dom.hi2);
  return Vec3(x1, x2, kPi * unit(rng));
}

Vec3 random_vec3(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double a = unit(rng), b = unit(rng), c = unit(rng);
  return Vec3(a, b, c);
}

}  // namespace

OracleComparison compare_with_oracle(const StructureParams& params, const SurfaceModel& surface,
                                     int evaluations, unsigned seed) {
  std::mt19937_64 rng(seed);
  OracleComparison out;
  for (int i = 0; i < evaluations; ++i) {
    const Vec3 y = random_chart_point(surface, rng);
    const Vec3 dy = random_vec3(rng), v0 = random_vec3(rng), v1 = random_vec3(rng);
    const Vec3 a = chart_line_derivative(params, surface, y, dy, v0, v1, false);
    const Vec3 b = chart_line_derivative(params, surface, y, dy, v0, v1, true);
    const double err = (a - b).norm();
    out.max_abs_error = std::max(out.max_abs_error, err);
    out.max_rel_error = std::max(out.max_rel_error, err / std::max(1.0, b.norm()));
    ++out.evaluations;
  }
  return out;
}

ConnectionResiduals connection_residuals(const StructureParams& params, const SurfaceModel& surface,
                                         int evaluations, unsigned seed) {
  std::mt19937_64 rng(seed);
  ConnectionResiduals out;
  const Vec3 zero = Vec3::Zero();
  for (int i = 0; i < evaluations; ++i) {
    const Vec3 y = random_chart_point(surface, rng);
    const Vec3 x = random_vec3(rng), v = random_vec3(rng), w = random_vec3(rng);
    auto D = [&](const Vec3& dir, const Vec3& field) {
      return chart_line_derivative(params, surface, y, dir, field, zero, false);
    };
    const Vec3 dxv = D(x, v), dvx = D(v, x), dxw = D(x, w);
    const Mat3 G = chart_metric(params, surface, y);
    out.torsion = std::max(out.torsion, std::sqrt((dxv - dvx).dot(G * (dxv - dvx))));
    const double h = 1e-4;
    auto gvw = [&](double e) { return v.dot(chart_metric(params, surface, y + e * x) * w); };
    const double dg = (-gvw(2 * h) + 8 * gvw(h) - 8 * gvw(-h) + gvw(-2 * h)) / (12 * h);
    const double rhs = dxv.dot(G * w) + v.dot(G * dxw);
    out.metric = std::max(out.metric, std::abs(dg - rhs) / std::max(1.0, std::abs(dg)));
    ++out.evaluations;
  }
  return out;
}

}  // namespace utb
