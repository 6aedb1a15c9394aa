#include "utb/acceptance.hpp"
#include "utb/errors.hpp"
#include "utb/parallel.hpp"
#include "utb/runner.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <cstdio>
#include <iostream>

namespace {

int run_and_emit(const utb::RunSummary& s, const utb::RunConfig& cfg, const std::string& out_dir) {
  const std::string dir = out_dir.empty() ? cfg.run.output : out_dir;
  utb::emit_outputs(s, dir);
  std::cout << s.report;
  std::cout << "outputs written to " << dir << "\n";
  return s.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"utb: curves in unit tangent bundles of surfaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir, prop;
  auto* classify = app.add_subcommand("classify", "classify the configured lifted curve");
  classify->add_option("-c,--config", config_path, "config JSON")->required();
  classify->add_option("-o,--output", out_dir, "output directory (default run.output)");

  auto* verify = app.add_subcommand("verify", "verify a proposition on the configured family");
  verify->add_option("--prop", prop, "proposition")->required()->check(CLI::IsMember({"3.1", "3.2", "3.3", "3.4", "3.6"}));
  verify->add_option("-c,--config", config_path, "config JSON")->required();
  verify->add_option("-o,--output", out_dir, "output directory (default run.output)");

  auto* oracle = app.add_subcommand("oracle", "compare the connection with the chart oracle");
  oracle->add_option("-c,--config", config_path, "config JSON")->required();

  auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : utb::kExitConfig;
  }

  try {
    utb::apply_thread_env();
    if (*classify) {
      const utb::RunConfig cfg = utb::load_config(config_path);
      return run_and_emit(utb::run_classify(cfg), cfg, out_dir);
    }
    if (*verify) {
      const utb::RunConfig cfg = utb::load_config(config_path);
      return run_and_emit(utb::run_verify(cfg, prop), cfg, out_dir);
    }
    if (*oracle) {
      const utb::RunConfig cfg = utb::load_config(config_path);
      const utb::StructureParams params = utb::structure_params(cfg);
      const utb::SurfaceModel surface = utb::build_surface(cfg.surface);
      const utb::OracleComparison c = utb::compare_with_oracle(params, surface, 200, 1);
      const utb::ConnectionResiduals r = utb::connection_residuals(params, surface, 50, 2);
      const bool ok = c.max_rel_error < 1e-5 && r.torsion < 1e-5 && r.metric < 1e-5;
      std::cout << fmt::format("oracle comparison on {}: {} evaluations\n", surface.name(), c.evaluations);
      std::cout << fmt::format("  max relative error {:.3e}\n  max absolute error {:.3e}\n", c.max_rel_error,
                               c.max_abs_error);
      std::cout << fmt::format("torsion residual {:.3e}\nmetric compatibility residual {:.3e}\n", r.torsion,
                               r.metric);
      std::cout << (ok ? "pass\n" : "fail\n");
      return ok ? utb::kExitPass : utb::kExitFail;
    }
    if (*selftest) {
      const auto results = utb::run_acceptance([](const utb::CriterionResult& r) {
        std::cout << utb::format_criterion(r) << std::flush;
      });
      int met = 0;
      for (const auto& r : results) met += r.status != utb::CriterionStatus::Fail ? 1 : 0;
      std::cout << fmt::format("{} of {} criteria met\n", met, results.size());
      return utb::all_pass(results) ? utb::kExitPass : utb::kExitFail;
    }
  } catch (const utb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return utb::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return utb::kExitNumerical;
  }
  return utb::kExitConfig;
}
