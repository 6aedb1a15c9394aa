#include "utb/acceptance.hpp"

#include "utb/errors.hpp"
#include "utb/parallel.hpp"
#include "utb/runner.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <random>

namespace utb {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CriterionResult make_result(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string e3(double v) { return std::isfinite(v) ? fmt::format("{:.3e}", v) : format_number(v); }

CriterionStatus status_of(bool ok) { return ok ? CriterionStatus::Pass : CriterionStatus::Fail; }

std::string budget_line(double seconds, double budget, bool& ok) {
  const bool within = seconds < budget;
  ok = ok && within;
  return within ? fmt::format("runtime within the {} s budget", budget)
                : fmt::format("runtime exceeded the {} s budget", budget);
}

SurfaceModel random_surface(std::mt19937_64& rng, int pick) {
  std::uniform_real_distribution<double> radius(0.5, 3.0);
  switch (pick % 4) {
    case 0: return SurfaceModel::plane();
    case 1: return SurfaceModel::sphere(1.0);
    case 2: return SurfaceModel::sphere(radius(rng));
    default: return SurfaceModel::from_expressions("1+x2^2/4", "x1*x2/8", "exp(x1/3)", {-2, 2, -2, 2});
  }
}

RawParams random_compatible_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.5, 6.0), unit(-1.0, 1.0);
  RawParams p;
  p.c1 = pos(rng);
  p.c2 = pos(rng);
  p.d1 = -0.4 * p.c1 + 3.0 * 0.5 * (unit(rng) + 1.0);
  p.lambda = (unit(rng) < 0 ? -1.0 : 1.0) * (0.3 + 1.7 * 0.5 * (unit(rng) + 1.0));
  p.a1 = (unit(rng) < 0 ? -1.0 : 1.0) * std::sqrt(p.c1 / p.c2);
  do {
    p.b1 = unit(rng);
  } while (std::abs(p.a1 + 2.0 * kUnitBundleT * p.b1) < 0.1);
  return p;
}

RawParams random_params(std::mt19937_64& rng) {
  RawParams p = random_compatible_params(rng);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  p.a1 *= scale(rng);
  return p;
}

}  // namespace

std::string to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::Pass: return "PASS";
    case CriterionStatus::Fail: return "FAIL";
    case CriterionStatus::Exploratory: return "EXPLORATORY";
  }
  return "FAIL";
}

CriterionResult criterion_contact_identities() {
  const auto t0 = Clock::now();
  CriterionResult r = make_result(1, "contact identities over 1000 random draws");
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double eta_xi = 0.0, phi_sq = 0.0, phi_metric = 0.0, xi_unit = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const SurfaceModel surface = random_surface(rng, i);
    const StructureParams params = validate_params(random_compatible_params(rng));
    Vec3 y;
    if (surface.kind() == SurfaceModel::Kind::Sphere) {
      y = Vec3(0.2 + (kPi - 0.4) * 0.5 * (unit(rng) + 1.0), kPi * unit(rng), kPi * unit(rng));
    } else {
      y = Vec3(1.8 * unit(rng), 1.8 * unit(rng), kPi * unit(rng));
    }
    const LocalGeometry loc = local_geometry(surface, chart_bundle_point(surface, y));
    const ContactTensors ct = contact_tensors(params, loc);
    auto draw = [&] {
      BundleTangent a;
      a.h = Vec2(unit(rng), unit(rng));
      a.t = loc.proj(Vec2(unit(rng), unit(rng)));
      return a;
    };
    const BundleTangent a = draw(), b = draw();
    eta_xi = std::max(eta_xi, std::abs(ct.eta(ct.xi) - 1.0));
    const BundleTangent d = ct.phi(ct.phi(a)) + a - ct.eta(a) * ct.xi;
    phi_sq = std::max(phi_sq, g1_norm(params, loc, d));
    phi_metric = std::max(phi_metric, std::abs(g1(params, loc, ct.phi(a), ct.phi(b)) - g1(params, loc, a, b) +
                                               ct.eta(a) * ct.eta(b)));
    xi_unit = std::max(xi_unit, std::abs(g1(params, loc, ct.xi, ct.xi) - 1.0));
  }
  const double tol = 1e-9;
  bool ok = eta_xi < tol && phi_sq < tol && phi_metric < tol && xi_unit < tol;
  r.details.push_back(fmt::format("eta1(xi1) = 1: max residual {}", e3(eta_xi)));
  r.details.push_back(fmt::format("phi1^2 = -Id + eta1 (x) xi1: max residual {}", e3(phi_sq)));
  r.details.push_back(fmt::format("g1(phi1 A, phi1 B) = g1(A, B) - eta1(A) eta1(B): max residual {}", e3(phi_metric)));
  r.details.push_back(fmt::format("g1(xi1, xi1) = 1: max residual {}", e3(xi_unit)));
  r.seconds = since(t0);
  r.details.push_back(budget_line(r.seconds, 5.0, ok));
  r.status = status_of(ok);
  return r;
}

CriterionResult criterion_connection_oracle() {
  const auto t0 = Clock::now();
  CriterionResult r = make_result(2, "connection against the chart oracle");
  std::mt19937_64 rng(20240202);
  const std::vector<std::pair<std::string, RawParams>> sets = {
      {"canonical", RawParams{}}, {"random 1", random_params(rng)}, {"random 2", random_params(rng)}};
  const std::vector<std::pair<std::string, SurfaceModel>> surfaces = {
      {"plane", SurfaceModel::plane()}, {"sphere R=1", SurfaceModel::sphere(1.0)}, {"sphere R=2", SurfaceModel::sphere(2.0)}};
  int evaluations = 0;
  double worst = 0.0;
  unsigned seed = 1;
  for (const auto& [pname, raw] : sets) {
    const StructureParams params = validate_params(raw);
    for (const auto& [sname, surface] : surfaces) {
      const OracleComparison c = compare_with_oracle(params, surface, 25, seed++);
      evaluations += c.evaluations;
      worst = std::max(worst, c.max_rel_error);
      r.details.push_back(fmt::format("{} on {}: max relative error {} over {} evaluations", pname, sname,
                                      e3(c.max_rel_error), c.evaluations));
    }
  }
  bool ok = worst < 1e-5 && evaluations >= 200;
  r.details.push_back(fmt::format("{} evaluations, worst relative error {} (tolerance 1e-5)", evaluations, e3(worst)));
  r.seconds = since(t0);
  r.details.push_back(budget_line(r.seconds, 30.0, ok));
  r.status = status_of(ok);
  return r;
}

CriterionResult criterion_metric_torsion() {
  const auto t0 = Clock::now();
  CriterionResult r = make_result(3, "metric compatibility and torsion of the connection");
  std::mt19937_64 rng(20240303);
  const std::vector<RawParams> sets = {RawParams{}, random_params(rng), random_params(rng)};
  const std::vector<SurfaceModel> surfaces = {SurfaceModel::plane(), SurfaceModel::sphere(1.0), SurfaceModel::sphere(2.0),
                                              random_surface(rng, 3)};
  double torsion = 0.0, metric = 0.0;
  int evaluations = 0;
  unsigned seed = 100;
  for (const RawParams& raw : sets) {
    const StructureParams params = validate_params(raw);
    for (const SurfaceModel& surface : surfaces) {
      const ConnectionResiduals c = connection_residuals(params, surface, 20, seed++);
      torsion = std::max(torsion, c.torsion);
      metric = std::max(metric, c.metric);
      evaluations += c.evaluations;
    }
  }
  const bool ok = torsion < 1e-5 && metric < 1e-5;
  r.details.push_back(fmt::format("{} evaluations on plane, spheres R=1, 2 and a custom surface", evaluations));
  r.details.push_back(fmt::format("torsion: max residual {}", e3(torsion)));
  r.details.push_back(fmt::format("metric compatibility: max relative residual {}", e3(metric)));
  r.seconds = since(t0);
  r.status = status_of(ok);
  return r;
}

CriterionResult criterion_prop31() {
  const auto t0 = Clock::now();
  CriterionResult r = make_result(4, "N-Legendre family on the unit sphere with c2 = c1 + d1");
  const SurfaceModel sphere = SurfaceModel::sphere(1.0);
  bool ok = true;
  const std::vector<std::pair<std::string, RawParams>> sets = {{"canonical", RawParams{}},
                                                               {"c1=c2=2 lambda=0.5", RawParams{2, 2, 0, 0.5, 1, 0}}};
  for (const auto& [name, raw] : sets) {
    const StructureParams params = validate_params(raw);
    const PropositionResult res = verify_prop_31(params, sphere, prop31_family(params));
    int qualifying = 0;
    double worst = 0.0;
    for (const MemberEvidence& m : res.members) {
      if (!m.qualifies) continue;
      ++qualifying;
      worst = std::max(worst, std::isfinite(m.max_abs_n) ? m.max_abs_n : kInf);
    }
    const bool set_ok = res.verdict == Verdict::Pass && qualifying >= 6 && worst < 1e-4;
    ok = ok && set_ok;
    r.details.push_back(fmt::format("{}: {}, {} qualifying lifts, max |g1(N~,xi1)| {}", name, to_string(res.verdict),
                                    qualifying, e3(worst)));
  }
  {
    const StructureParams neg = validate_params(RawParams{4, 2, 0, 1, std::sqrt(2.0), 0});
    const CurveSpec curve = prop31_family(neg).front();
    const ClassificationReport rep = classify(neg, build_curve(neg, sphere, curve));
    const bool neg_ok = rep.n_verdict != NVerdict::NLegendre;
    ok = ok && neg_ok;
    r.details.push_back(fmt::format("negative control c1=4 c2=2 d1=0, {}: N-verdict {}, max |g1(N~,xi1)| {}",
                                    curve.name, to_string(rep.n_verdict), e3(rep.n_stats.max_abs)));
  }
  {
    const StructureParams off = validate_params(RawParams{2, 4, 2, 1, std::sqrt(0.5), 0});
    const PropositionResult res = verify_prop_31(off, sphere, prop31_family(off));
    r.details.push_back(fmt::format("exploratory d1=2 (c1=2 c2=4): {}, max residual {}", to_string(res.verdict),
                                    e3(res.max_conclusion_residual())));
  }
  r.seconds = since(t0);
  r.details.push_back(budget_line(r.seconds, 60.0, ok));
  r.status = status_of(ok);
  return r;
}

CriterionResult criterion_formula_chain() {
  CriterionResult r = make_result(5, "closed-form g1(N~,xi1) against the direct value");
  bool ok = true;
  for (const Scenario& sc : builtin_scenarios()) {
    const StructureParams params = validate_params(sc.params);
    const SurfaceModel surface = build_surface(sc.surface);
    const ClassificationReport rep = classify(params, build_curve(params, surface, sc.curve));
    const bool defined = rep.n_verdict != NVerdict::Undefined;
    const bool sc_ok = rep.max_formula_gap < 1e-4;
    ok = ok && sc_ok;
    r.details.push_back(fmt::format("{}: max gap {}{}", sc.name, e3(rep.max_formula_gap),
                                    defined ? "" : " (Frenet frame undefined, no samples compared)"));
  }
  const std::vector<std::pair<std::string, RawParams>> off = {
      {"alpha=0.5", RawParams{2, 2, 0, 1, 1, 0}},
      {"lambda=2", RawParams{4, 4, 0, 2, 1, 0}},
      {"d1=2", RawParams{2, 4, 2, 1, std::sqrt(0.5), 0}}};
  for (const auto& [name, raw] : off) {
    RunConfig cfg;
    cfg.structure = raw;
    cfg.surface = sphere_spec(1.0);
    CurveSpec c;
    c.name = "parallel small circle";
    c.base.kind = "small_circle";
    c.base.colatitude = 1.0;
    c.base.length = 2.0;
    c.lift.kind = "parallel";
    c.lift.angle = 0.3;
    cfg.curve = c;
    cfg.run.samples = 101;
    const StructureParams params = structure_params(cfg);
    const std::vector<std::string> gaps = normalization_gaps(params);
    const RunSummary s = run_classify(cfg);
    int missing = 0;
    for (const std::string& g : gaps) {
      if (s.report.find(g) == std::string::npos) ++missing;
    }
    const bool flagged = !gaps.empty() && missing == 0;
    ok = ok && flagged;
    r.details.push_back(fmt::format("{}: {} normalization gap(s) flagged in the report{}, max gap {}", name,
                                    gaps.size() - static_cast<std::size_t>(missing),
                                    flagged ? "" : " (missing)",
                                    e3(s.document["residual_maxima"]["formula_gap"].get<double>())));
  }
  const bool canonical_clean = normalization_gaps(canonical_params()).empty();
  ok = ok && canonical_clean;
  r.details.push_back(canonical_clean ? "canonical constants: no gap flagged" : "canonical constants: gap flagged");
  r.status = status_of(ok);
  return r;
}

CriterionResult criterion_prop34() {
  CriterionResult r = make_result(6, "plane lifts: geodesic bases and the curvature ratio");
  const StructureParams params = canonical_params();
  const SurfaceModel plane = SurfaceModel::plane();
  bool part1 = true;
  for (const CurveSpec& c : prop34_family(plane_spec())) {
    if (c.base.kind != "geodesic") continue;
    const ClassificationReport rep = classify(params, build_curve(params, plane, c));
    const bool legendre = rep.n_verdict == NVerdict::NLegendre && rep.n_stats.max_abs < 1e-4;
    part1 = part1 && legendre;
    std::string what = to_string(rep.n_verdict);
    if (rep.n_verdict == NVerdict::Undefined) what += " (" + rep.n_error + ")";
    else what += fmt::format(", max |g1(N~,xi1)| {}", e3(rep.n_stats.max_abs));
    r.details.push_back(fmt::format("line, {}: T {}, N {}", c.name, to_string(rep.t_verdict), what));
  }
  const PropositionResult res = verify_prop_34(params, plane, prop34_family(plane_spec()));
  bool part2 = true;
  int compared = 0;
  for (const MemberEvidence& m : res.members) {
    if (m.name.rfind("circle", 0) != 0) continue;
    if (!m.qualifies) {
      r.details.push_back(fmt::format("{}: excluded ({})", m.name, m.note));
      continue;
    }
    ++compared;
    double q_rel = kNaN;
    for (const auto& [k, v] : m.metrics) {
      if (k == "q_rel_dev") q_rel = v;
    }
    part2 = part2 && m.ok;
    r.details.push_back(fmt::format("{}: N {}, kappa/kappa~ relative spread {}, {}", m.name,
                                    to_string(m.n_verdict), e3(q_rel), m.ok ? "consistent" : "inconsistent"));
  }
  part2 = part2 && compared > 0;
  r.details.push_back(fmt::format("geodesic bases N-Legendre: {}", part1 ? "yes" : "no"));
  r.details.push_back(fmt::format("circle bases, N-slant iff kappa/kappa~ constant: {}", part2 ? "yes" : "no"));
  r.status = status_of(part1 && part2);
  return r;
}

CriterionResult criterion_cho() {
  CriterionResult r = make_result(7, "Sasakian sphere, Cho ratios of slant lifts");
  const StructureParams params = validate_params(RawParams{1, 4, 3, 1, 0.5, 0});
  const SurfaceModel sphere = SurfaceModel::sphere(2.0);
  const SasakianReport sas = sasakian_check(params, sphere);
  r.details.push_back(fmt::format("sphere R=2, a1=0.5, Sasakian: {}", sas.is_sasakian ? "yes" : "no"));
  const PropositionResult res = verify_prop_33(params, sphere, prop33_family(params, sphere));
  int qualifying = 0;
  bool found = false;
  for (const MemberEvidence& m : res.members) {
    if (!m.qualifies) continue;
    ++qualifying;
    double plus = kInf, minus = kInf;
    for (const auto& [k, v] : m.metrics) {
      if (k == "cho_plus_rel_std") plus = v;
      if (k == "cho_minus_rel_std") minus = v;
    }
    const bool member_ok = std::min(plus, minus) < 1e-3;
    found = found || member_ok;
    r.details.push_back(fmt::format("{}: relative std (tau~+1)/kappa~ {}, (tau~-1)/kappa~ {}", m.name, e3(plus),
                                    e3(minus)));
  }
  {
    CurveSpec c;
    c.name = "small circle slant c=0.5";
    c.base.kind = "small_circle";
    c.base.colatitude = 1.0;
    c.base.length = 3.0;
    c.lift.kind = "slant";
    c.lift.c = 0.5;
    c.lift.phi0 = 0.3;
    const ClassificationReport rep = classify(params, build_curve(params, sphere, c));
    const ChoRatios cho = cho_ratios(params, rep.rows);
    r.details.push_back(fmt::format(
        "exploratory {}: (tau~+-1)/kappa~ relative std {} / {}, |tau~+-a1|/kappa~ relative std {} / {}", c.name,
        e3(cho.rel_plus), e3(cho.rel_minus), e3(cho.rel_scaled_plus), e3(cho.rel_scaled_minus)));
  }
  if (qualifying == 0) {
    r.details.push_back("no slant lift meets the torsion hypothesis");
    r.status = CriterionStatus::Exploratory;
  } else {
    r.status = status_of(sas.is_sasakian && found);
  }
  return r;
}

CriterionResult criterion_geometry_kernel() {
  CriterionResult r = make_result(8, "curvature, geodesics and parallel transport");
  bool ok = true;
  double analytic = 0.0, fd = 0.0;
  for (double R : {1.0, 2.0, 5.0}) {
    const SurfaceModel s = SurfaceModel::sphere(R);
    for (int i = 0; i < 9; ++i) {
      const ChartPoint p{0.3 + 0.3 * i, -2.0 + 0.5 * i};
      const double K = 1.0 / (R * R);
      analytic = std::max(analytic, std::abs(gauss_curvature(s, p, DerivativePath::Analytic) - K));
      fd = std::max(fd, std::abs(gauss_curvature(s, p, DerivativePath::FiniteDifference) - K));
    }
  }
  ok = ok && analytic < 1e-8 && fd < 1e-6;
  r.details.push_back(fmt::format("K = 1/R^2 for R = 1, 2, 5: analytic {}, finite difference {}", e3(analytic), e3(fd)));

  auto speed = [](const SurfaceModel& s, const BaseCurve& c, double t) {
    const BaseJet j = c.jet(t);
    return std::sqrt(inner(s.metric(ChartPoint::from(j.pos)), j.vel, j.vel));
  };
  double speed_drift = 0.0, transport_drift = 0.0;
  const SurfaceModel custom = SurfaceModel::from_expressions("1", "0", "(2+cos(x1))^2", {-10, 10, -10, 10});
  const std::vector<SurfaceModel> surfaces = {SurfaceModel::sphere(1.0), SurfaceModel::sphere(2.0),
                                              SurfaceModel::sphere(5.0), custom};
  for (const SurfaceModel& s : surfaces) {
    const bool sphere = s.kind() == SurfaceModel::Kind::Sphere;
    const ChartPoint p = sphere ? ChartPoint{1.0, 0.2} : ChartPoint{0.4, 0.1};
    const TangentVector v(0.6, 0.3);
    const BaseCurve g = geodesic(s, p, v, 6.0);
    const double v0 = speed(s, g, 0.0);
    for (int i = 1; i <= 60; ++i) speed_drift = std::max(speed_drift, std::abs(speed(s, g, 0.1 * i) - v0) / v0);

    const BaseCurve loop = sphere ? sphere_parallel(1.0, 1.0, 0.0, 2.0 * kPi) : g;
    const TangentVector w0(0.2, 0.7);
    const double n0 = std::sqrt(inner(s.metric(loop.point(loop.s0())), w0, w0));
    for (int i = 1; i <= 8; ++i) {
      const double t = loop.s0() + loop.length() * i / 8.0;
      const TangentVector w = parallel_transport(s, loop, w0, loop.s0(), t);
      const double n = std::sqrt(inner(s.metric(loop.point(t)), w, w));
      transport_drift = std::max(transport_drift, std::abs(n - n0) / n0);
    }
  }
  ok = ok && speed_drift < 1e-8 && transport_drift < 1e-8;
  r.details.push_back(fmt::format("geodesic speed drift {}", e3(speed_drift)));
  r.details.push_back(fmt::format("parallel transport norm drift {}", e3(transport_drift)));
  r.status = status_of(ok);
  return r;
}

std::string format_criterion(const CriterionResult& r) {
  std::string out = fmt::format("criterion {} [{}] {}\n", r.id, to_string(r.status), r.title);
  for (const std::string& d : r.details) out += "    " + d + "\n";
  return out;
}

std::string format_results(const std::vector<CriterionResult>& results) {
  std::string out;
  int pass = 0;
  for (const CriterionResult& r : results) {
    out += format_criterion(r);
    if (r.status != CriterionStatus::Fail) ++pass;
  }
  out += fmt::format("{} of {} criteria met\n", pass, results.size());
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    if (r.status == CriterionStatus::Fail) return false;
  }
  return true;
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& progress) {
  using Fn = CriterionResult (*)();
  const Fn criteria[] = {criterion_contact_identities, criterion_connection_oracle, criterion_metric_torsion,
                         criterion_prop31,             criterion_formula_chain,     criterion_prop34,
                         criterion_cho,                criterion_geometry_kernel};
  const auto t0 = Clock::now();
  std::vector<CriterionResult> out;
  std::string first;
  for (Fn f : criteria) {
    try {
      out.push_back(f());
    } catch (const Error& e) {
      CriterionResult r = make_result(static_cast<int>(out.size()) + 1, "criterion raised an error");
      r.details.push_back(e.what());
      out.push_back(r);
    }
    first += format_criterion(out.back());
    if (progress) progress(out.back());
  }

  CriterionResult det = make_result(9, "deterministic rerun and total runtime");
  const unsigned saved = thread_limit();
  set_thread_limit(1);
  std::string second;
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    try {
      second += format_criterion(criteria[i]());
    } catch (const Error& e) {
      CriterionResult r = make_result(static_cast<int>(i) + 1, "criterion raised an error");
      r.details.push_back(e.what());
      second += format_criterion(r);
    }
  }
  set_thread_limit(saved);
  bool ok = first == second;
  det.details.push_back(ok ? "second pass on one thread renders identically"
                           : "second pass on one thread differs");
  det.seconds = since(t0);
  det.details.push_back(budget_line(det.seconds, 180.0, ok));
  det.status = status_of(ok);
  out.push_back(det);
  if (progress) progress(out.back());
  return out;
}

}  // namespace utb
