#pragma once

#include <functional>
#include <string>
#include <vector>

namespace utb {

enum class CriterionStatus { Pass, Fail, Exploratory };

std::string to_string(CriterionStatus s);

struct CriterionResult {
  int id = 0;
  std::string title;
  CriterionStatus status = CriterionStatus::Fail;
  std::vector<std::string> details;
  double seconds = 0.0;  ///< wall time, never printed
};

/// Criteria 1 to 8. Each is deterministic apart from its time budget.
CriterionResult criterion_contact_identities();
CriterionResult criterion_connection_oracle();
CriterionResult criterion_metric_torsion();
CriterionResult criterion_prop31();
CriterionResult criterion_formula_chain();
CriterionResult criterion_prop34();
CriterionResult criterion_cho();
CriterionResult criterion_geometry_kernel();

/// Runs criteria 1 to 8, then criterion 9: a second pass on one thread must
/// render identically and the whole suite must stay within its budget.
/// `progress` receives each criterion as it completes.
std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& progress = {});

/// One status line per criterion followed by indented detail lines.
std::string format_criterion(const CriterionResult& r);
std::string format_results(const std::vector<CriterionResult>& results);

bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace utb
