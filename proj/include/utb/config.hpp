#pragma once

#include "utb/numerics.hpp"
#include "utb/propositions.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace utb {

struct Tolerances {
  double classify = kClassifyTol;
  double zero = 1e-4;
  double relative = 1e-3;
};

struct RunSettings {
  int samples = 400;
  double fd_step = 1e-3;
  int rk_steps = 2000;
  Tolerances tolerances;
  std::string output = "utb-out";
};

struct RunConfig {
  RawParams structure;
  SurfaceSpec surface;
  std::optional<CurveSpec> curve;
  std::vector<CurveSpec> family;
  RunSettings run;
};

/// Errors: IoError, ParseError (with line and column), ValidationError (with
/// the field path).
RunConfig load_config(const std::string& path);
/// Errors: ParseError, ValidationError.
RunConfig parse_config_text(const std::string& text);
/// Errors: ValidationError.
RunConfig parse_config(const nlohmann::json& j);

/// Canonical form: every field that applies to the chosen kinds, nothing else.
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const CurveSpec& spec);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Errors: ValidationError naming the structure field.
StructureParams structure_params(const RunConfig& cfg);

VerifyOptions verify_options(const RunConfig& cfg);
NumericsSettings numerics_settings(const RunConfig& cfg);

}  // namespace utb
