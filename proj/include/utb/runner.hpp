#pragma once

#include "utb/config.hpp"
#include "utb/report.hpp"

#include <string>

namespace utb {

/// Classifies the configured curve. Errors: ValidationError when the config
/// has no curve, plus domain errors from the curve construction.
RunSummary run_classify(const RunConfig& cfg);

/// Verifies proposition `id` (3.1, 3.2, 3.3, 3.4 or 3.6). Families come
/// from `family`, else `curve`, else the builtin family for the proposition.
RunSummary run_verify(const RunConfig& cfg, const std::string& id);

/// Connection against the chart oracle at `evaluations` seeded random points.
struct OracleComparison {
  int evaluations = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

OracleComparison compare_with_oracle(const StructureParams& params, const SurfaceModel& surface,
                                     int evaluations, unsigned seed);

/// Torsion and metric-compatibility residuals of the connection, with the
/// chart metric differentiated numerically.
struct ConnectionResiduals {
  int evaluations = 0;
  double torsion = 0.0;
  double metric = 0.0;  ///< relative to max(1, |X g1(Y, Z)|)
};

ConnectionResiduals connection_residuals(const StructureParams& params, const SurfaceModel& surface,
                                         int evaluations, unsigned seed);

}  // namespace utb
