#include "utb/report.hpp"

#include "utb/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace utb {

using nlohmann::json;

int exit_code_for(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Fail: return kExitFail;
    case Verdict::HypothesisNotMet: return kExitHypothesis;
  }
  return kExitFail;
}

int exit_code_for(ErrorKind kind) {
  return classify_error(kind) == ErrorClass::Numerical ? kExitNumerical : kExitConfig;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

namespace {

void dump(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += json(it.key()).dump();
        out += ": ";
        dump(it.value(), indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const json& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump(v, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      std::string s = fmt::format("{:.17g}", v);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

double parse_cell(const std::string& cell) {
  if (cell == "nan") return std::nan("");
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) fail(ErrorKind::ParseError, "bad CSV number '" + cell + "'");
  return v;
}

double max_abs_finite(double acc, double v) { return std::isfinite(v) ? std::max(acc, std::abs(v)) : acc; }

json stats_json(const std::vector<double>& values) {
  const ConstancyStats st = constancy(values);
  return {{"mean", st.mean}, {"max_dev", st.max_dev}, {"max_abs", st.max_abs}};
}

double number_or_nan(const json& v) { return v.is_number() ? v.get<double>() : std::nan(""); }

}  // namespace

std::string format_json(const json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

std::string samples_csv(const std::vector<SampleRow>& rows) {
  std::string out = kSamplesHeader;
  out += "\n";
  for (const SampleRow& r : rows) {
    const double cells[] = {r.s,           r.cos_theta_fp,      r.cos_theta_paper,    r.t_xi,
                            r.n_xi_direct, r.n_xi_formula_plus, r.n_xi_formula_minus, r.kappa_tilde,
                            r.tau_tilde,   r.beta_paper,        r.beta_fp};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      if (i) out += ",";
      out += format_number(cells[i]);
    }
    out += "\n";
  }
  return out;
}

std::vector<SampleRow> parse_samples_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSamplesHeader) fail(ErrorKind::ParseError, "unexpected CSV header");
  std::vector<SampleRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) v.push_back(parse_cell(cell));
    if (v.size() != 11) fail(ErrorKind::ParseError, fmt::format("CSV row {} has {} columns", rows.size() + 1, v.size()));
    SampleRow r;
    r.s = v[0];
    r.cos_theta_fp = v[1];
    r.cos_theta_paper = v[2];
    r.t_xi = v[3];
    r.n_xi_direct = v[4];
    r.n_xi_formula_plus = v[5];
    r.n_xi_formula_minus = v[6];
    r.kappa_tilde = v[7];
    r.tau_tilde = v[8];
    r.beta_paper = v[9];
    r.beta_fp = v[10];
    rows.push_back(r);
  }
  return rows;
}

json evidence_maxima(const std::vector<SampleRow>& rows) {
  std::vector<double> t, n;
  double formula = 0.0, cos_gap = 0.0, beta_gap = 0.0;
  bool n_defined = true;
  for (const SampleRow& r : rows) {
    t.push_back(r.t_xi);
    cos_gap = max_abs_finite(cos_gap, r.cos_theta_fp - r.cos_theta_paper);
    beta_gap = max_abs_finite(beta_gap, r.beta_paper - r.beta_fp);
    if (!std::isfinite(r.n_xi_direct)) {
      n_defined = false;
      continue;
    }
    n.push_back(r.n_xi_direct);
    const double matching = r.beta_fp >= 0.0 ? r.n_xi_formula_minus : r.n_xi_formula_plus;
    formula = max_abs_finite(formula, r.n_xi_direct - matching);
  }
  json out;
  out["t_xi"] = stats_json(t);
  out["n_xi"] = n_defined ? stats_json(n) : json(nullptr);
  out["formula_gap"] = formula;
  out["cos_theta_gap"] = cos_gap;
  out["beta_gap"] = beta_gap;
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) fail(ErrorKind::IoError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::IoError, "cannot rename onto '" + path.string() + "'");
  }
}

void emit_outputs(const RunSummary& summary, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) fail(ErrorKind::IoError, "cannot create '" + dir.string() + "'");
  if (summary.emit_samples) {
    write_atomic(dir / "samples.csv", samples_csv(summary.samples));
  } else {
    std::filesystem::remove(dir / "samples.csv", ec);
    if (ec) fail(ErrorKind::IoError, "cannot remove stale '" + (dir / "samples.csv").string() + "'");
  }
  write_atomic(dir / "summary.json", format_json(summary.document));
  write_atomic(dir / "report.txt", summary.report);
}

ParsedSummary summary_fields(const json& doc) {
  ParsedSummary p;
  p.command = doc.value("command", "");
  if (doc.contains("verdicts")) {
    for (auto it = doc["verdicts"].begin(); it != doc["verdicts"].end(); ++it) {
      p.verdicts.emplace_back(it.key(), it.value().get<std::string>());
    }
  }
  auto flatten = [&](auto&& self, const std::string& prefix, const json& j) -> void {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) self(self, prefix + "." + it.key(), it.value());
    } else if (j.is_number() || j.is_null()) {
      p.residual_maxima.emplace_back(prefix, number_or_nan(j));
    }
  };
  if (doc.contains("residual_maxima")) flatten(flatten, "residual_maxima", doc["residual_maxima"]);
  return p;
}

ParsedSummary parse_summary(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, e.what());
  }
  return summary_fields(doc);
}

}  // namespace utb
