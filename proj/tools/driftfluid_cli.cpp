// Command line front end: run / validate / list-presets.
#include <CLI11.hpp>

#include <iostream>

#include "driftfluid/errors.hpp"
#include "driftfluid/runner.hpp"

int main(int argc, char** argv) {
  using namespace driftfluid;
  CLI::App app{"Drift-fluid simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool reference = false;
  int workers = 1;

  auto* run_cmd = app.add_subcommand("run", "run the experiment described by a config file");
  run_cmd->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "output directory (overrides output_dir)");
  run_cmd->add_flag("--reference-mode", reference, "serial deterministic kernels, one worker");
  run_cmd->add_option("--workers", workers, "parallel sweep members")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "check a config without running it");
  validate_cmd->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);

  app.add_subcommand("list-presets", "list initial-data presets and experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-presets")) {
      std::cout << "presets:\n";
      for (const auto& p : list_presets()) std::cout << "  " << p.name << "  " << p.description << "\n";
      std::cout << "experiments:\n";
      for (const auto& p : list_experiments()) std::cout << "  " << p.name << "  " << p.description << "\n";
      return 0;
    }
    const RunConfig config = load_config(config_path);
    if (app.got_subcommand("validate")) {
      bool bad = false;
      for (const auto& f : validate(config)) {
        std::cout << f.level << ": " << f.message << "\n";
        bad = bad || f.level == "error";
      }
      return bad ? 1 : 0;
    }
    RunOptions opts;
    if (!out_dir.empty()) opts.out = out_dir;
    opts.reference_mode = reference;
    opts.workers = workers;
    const RunManifest m = run(config, opts);
    for (const auto& c : m.checks) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (!m.error.empty()) std::cerr << "error: " << m.error << "\n";
    std::cout << m.files.size() << " files written, " << m.wall_seconds << " s\n";
    return m.ok() ? 0 : 2;
  } catch (const ConfigurationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}
