#pragma once

#include "utb/classification.hpp"
#include "utb/errors.hpp"
#include "utb/propositions.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace utb {

inline constexpr const char* kSamplesHeader =
    "s,cos_theta_fp,cos_theta_paper,t_xi,n_xi_direct,n_xi_formula_plus,n_xi_formula_minus,kappa_tilde,"
    "tau_tilde,beta_paper,beta_fp";

/// Exit codes of the command line tool.
enum ExitCode : int { kExitPass = 0, kExitFail = 2, kExitHypothesis = 3, kExitConfig = 4, kExitNumerical = 5 };

int exit_code_for(Verdict v);
int exit_code_for(ErrorKind kind);

/// 17 significant digits, shortest exact form for integers.
std::string format_number(double v);

/// JSON text with two-space indentation; floats use format_number and
/// non-finite floats become null.
std::string format_json(const nlohmann::json& j);

/// CSV with kSamplesHeader; non-finite values are written as nan, inf, -inf.
std::string samples_csv(const std::vector<SampleRow>& rows);
/// Parses the CSV columns back. Errors: ParseError.
std::vector<SampleRow> parse_samples_csv(const std::string& text);

/// Residual maxima computable from the CSV columns alone.
nlohmann::json evidence_maxima(const std::vector<SampleRow>& rows);

/// Writes to a temporary file in the same directory, then renames.
/// Errors: IoError.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct RunSummary {
  std::string command;
  nlohmann::json document;  ///< summary.json
  std::string report;       ///< report.txt
  std::vector<SampleRow> samples;
  bool emit_samples = true;
  int exit_code = kExitPass;
};

/// Writes summary.json, report.txt and (unless suppressed) samples.csv; a
/// suppressed samples.csv left by an earlier run is removed. Errors: IoError.
void emit_outputs(const RunSummary& summary, const std::filesystem::path& dir);

struct ParsedSummary {
  std::string command;
  std::vector<std::pair<std::string, std::string>> verdicts;
  std::vector<std::pair<std::string, double>> residual_maxima;
};

/// Verdicts and residual maxima from summary.json text. Errors: ParseError.
ParsedSummary parse_summary(const std::string& text);
/// The same fields taken from an in-memory summary document.
ParsedSummary summary_fields(const nlohmann::json& document);

}  // namespace utb
