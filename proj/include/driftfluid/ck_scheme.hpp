#pragma once

#include <span>
#include <vector>

#include "driftfluid/analytic_norm.hpp"
#include "driftfluid/eps_solver.hpp"

namespace driftfluid {

struct CkConfig {
  double epsilon = 0.01;
  /// delta0, delta (the target radius δ₁), eta and beta. The horizon is η(δ₀ - δ₁).
  NormParams norm{};
  /// Samples per oscillation period 2π√ε; the time grid also has at least
  /// `min_samples` points.
  double samples_per_period = 40.0;
  int min_samples = 8;
  int max_iterations = 40;
  double tolerance = 1e-10;
};

/// One iterate on the fixed time grid t_j = j dt, j = 0..count-1.
struct CkIterate {
  int n = 0;
  double dt = 0.0;
  std::vector<SpectralField> rho;
  std::vector<SpectralField> w;
  std::vector<SpectralField> G;           ///< parallel-only
  std::vector<SpectralField> sqrt_eps_e;  ///< √εE∥, parallel-only

  std::size_t size() const { return rho.size(); }
  double time(std::size_t j) const { return dt * static_cast<double>(j); }
};

struct ContractionRow {
  int n;
  double rho;  ///< shrinking norm of ρⁿ - ρⁿ⁻¹
  double w;
  double G;
  double E;    ///< of √εE∥ⁿ - √εE∥ⁿ⁻¹
  double total;
  double ratio;  ///< total(n) / total(n-1); NaN for the first row
};

struct ContractionReport {
  std::vector<ContractionRow> rows;
  double max_ratio = 0.0;  ///< over rows with n >= 2
  bool half_rate = false;  ///< max_ratio <= 0.5
  bool contracting = false;  ///< max_ratio < 1
  bool converged = false;
  bool diverged = false;
};

/// Differences between consecutive iterates in the shrinking norm.
ContractionRow iterate_difference(const CkIterate& prev, const CkIterate& next, const NormParams& p);

/// Builds the table from a sequence of at least two iterates.
ContractionReport contraction_report(std::span<const CkIterate> iterates, const NormParams& params);

/// Cauchy-Kovalevskaya iteration for the ε-system. ρ and w = v - G are
/// advanced by time quadrature of the previous iterate's tendencies, G and
/// √εE∥ by the Duhamel formulas driven by the previous iterate's wave source.
class CkScheme {
 public:
  /// `initial` must be an EpsState at t = 0 (G = 0).
  CkScheme(CkConfig config, EpsState initial);

  const CkConfig& config() const { return config_; }
  double horizon() const { return horizon_; }
  double dt() const { return dt_; }
  std::size_t samples() const { return count_; }

  /// ρ⁰ = ρ(0), w⁰ = v(0) and G⁰, √εE⁰ the free plasma oscillation.
  CkIterate initialize() const;
  CkIterate iterate(const CkIterate& prev) const;
  /// An iterate holding a given trajectory sampled on this scheme's time grid.
  CkIterate from_states(std::span<const EpsState> states) const;

  struct Result {
    CkIterate last;
    ContractionReport report;
  };
  /// Iterates until the total difference drops below the tolerance, the
  /// iteration cap is reached, or the norms stop being finite.
  Result run(int max_iterations = -1) const;

 private:
  CkConfig config_;
  EpsState initial_;
  EpsSolver solver_;
  double horizon_;
  double dt_;
  std::size_t count_;
};

/// Largest η in (0, eta_max] for which the first `iterations` consecutive
/// ratios (n >= 2) stay <= 0.5, by bisection with `steps` halvings. Returns 0
/// when even the smallest probe fails.
double bisect_eta(const CkConfig& config, const EpsState& initial, double eta_max,
                  int iterations = 5, int steps = 12);

}  // namespace driftfluid
