#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "driftfluid/analytic_norm.hpp"
#include "driftfluid/toy_entropy.hpp"

namespace driftfluid {

/// Named initial data and its parameters. Unused parameters are ignored by a preset.
struct InitialSpec {
  std::string preset = "single_mode";
  // single_mode
  int k_par = 1;
  double amplitude = 0.1;
  // random_band
  int kmax = 2;
  std::uint64_t seed = 1;
  std::string decay = "analytic";
  double rate = 0.5;
  double velocity_amplitude = 0.1;
  bool well_prepared = true;
  // shear
  std::vector<double> widths{0.08, 0.08};
  std::vector<double> bump_amplitudes{0.5, 0.5};
  std::vector<double> velocities{0.5, -0.5};
  double perturbation = 0.01;
  // two_stream
  double rho1 = 0.5;
  double stream = 1.0;
};

struct RunConfig {
  std::string experiment = "eps_run";
  std::array<int, 3> grid{8, 8, 16};
  std::vector<double> epsilons{0.1};
  double t_end = 1.0;
  std::optional<double> dt;
  double samples_per_period = 40.0;
  double cfl = 0.5;
  NormParams norm{};
  InitialSpec initial{};
  double admissibility_constant = 1.0;
  int output_every = 1;
  int snapshot_every = 0;
  std::string output_dir = "run";
  // contraction
  bool bisect_eta = true;
  double eta_max = 1.0;
  int max_iterations = 40;
  // growth
  int k_max = 4;
  double growth_seed = 1e-8;
  int harmonics = 4;
  double seed_l2 = 1e-6;
  double analytic_rate = 0.5;
  double algebraic_exponent = 1.0;
  // dichotomy
  DichotomyConfig dichotomy{};

  std::string source;  ///< the parsed document, echoed in the manifest
};

/// Parses a JSON document. Unknown keys and ill-typed values raise
/// ConfigurationError naming the key path (e.g. "initial.seed").
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

struct Finding {
  std::string level;  ///< "error", "warning" or "info"
  std::string message;
};

/// Dry-run checks, including the admissibility bound ‖∫ρ₀dx⊥ - 1‖ <= C√ε
/// and the oscillation time-step policy. Never throws.
std::vector<Finding> validate(const RunConfig& config);

struct RunOptions {
  std::optional<std::filesystem::path> out;
  bool reference_mode = false;
  int workers = 1;
};

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

struct RunManifest {
  std::string config;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<std::string> files;
  std::vector<CheckResult> checks;
  std::string error;  ///< nonempty when the run aborted
  bool ok() const;
};

/// Runs the configured experiment and writes manifest.json last, atomically.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();
std::vector<PresetInfo> list_experiments();

std::string version_string();

}  // namespace driftfluid
