#pragma once

#include <functional>
#include <vector>

#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// N cold phases on T¹ (the parallel axis), each with weight 1/N, coupled by
/// -εV'' = Σ_θ ρ^θ/N - 1 and E = -V'.
struct MultiPhaseState {
  double t = 0.0;
  double epsilon = 0.1;
  std::vector<SpectralField> rho;
  std::vector<SpectralField> u;

  std::size_t phases() const { return rho.size(); }
  /// Σ_θ ρ^θ / N.
  SpectralField total_density() const;
};

struct MultiPhaseTendency {
  std::vector<SpectralField> rho;
  std::vector<SpectralField> u;
};

/// Checks shapes, weights and the Poisson solvability (ConfigurationError otherwise).
void validate(const MultiPhaseState& s);

/// ∂tρ^θ = -(ρ^θu^θ)', ∂tu^θ = -u^θ u^θ' + E.
MultiPhaseTendency toy_rhs(const MultiPhaseState& s);
/// RK4; re-pins the phase masses. Throws BlowUpError.
MultiPhaseState toy_step(const MultiPhaseState& s, double dt);
/// min(0.5 / (max|u| N), 2π√ε / 40).
double toy_dt_max(const MultiPhaseState& s);

/// E = -V' from the total density.
SpectralField toy_field(const MultiPhaseState& s);

/// ½Σ_θ(1/N)∫ρ^θ|u^θ|² + (ε/2)∫|V'|².
double toy_energy(const MultiPhaseState& s);

/// Reference flow: each phase translates rigidly at its own constant speed,
/// ρ^θ(t, x) = ρ^θ₀(x - u^θ t), with the potential of the reference total
/// density. With all u^θ equal this is the θ-independent limit flow.
struct ReferenceFlow {
  std::vector<SpectralField> rho0;
  std::vector<double> u;

  std::vector<SpectralField> density(double t) const;
};

/// ½Σ_θ(1/N)∫ρ^θ|u^θ - u_ref^θ|² + (ε/2)∫|V' - V_ref'|².
double relative_entropy(const MultiPhaseState& s, const ReferenceFlow& ref);

/// Per-phase masses ∫ρ^θ.
std::vector<double> phase_masses(const MultiPhaseState& s);

struct DichotomyConfig {
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  int npar = 64;
  double t_end = 1.5;
  /// Stable branch: ρ^{0,1} = 1 ± b cos(2πx), u^θ = c + √ε s sin(2πx).
  double density_contrast = 0.2;
  double drift_speed = 0.5;
  double well_prepared_amplitude = 0.1;
  /// Unstable branch: ρ^θ = 1, u^θ = ±(a + d sin(2πx)) about the counter-streaming state.
  double stream_speed = 0.3;
  double perturbation = 1e-3;
};

struct BranchResult {
  double epsilon;
  double h_initial;
  double h_final;
  double t_final;  ///< T, or the last valid time before a blow-up
  bool blew_up;
  double max_energy_increase;  ///< max over steps of E(t_{n+1}) - E(t_n), relative to E(0)
};

struct DichotomyReport {
  std::vector<BranchResult> stable;
  std::vector<BranchResult> unstable;
  bool stable_decreasing = false;      ///< H(T) strictly decreasing along the sweep
  bool unstable_nondecreasing = false;  ///< H(T) non-decreasing along the sweep
};

struct BranchSetup {
  MultiPhaseState initial;
  ReferenceFlow reference;
};
BranchSetup stable_branch(const DichotomyConfig& c, double epsilon);
BranchSetup unstable_branch(const DichotomyConfig& c, double epsilon);

/// Integrates one branch; `observe` sees the initial state and every accepted step.
BranchResult run_branch(const BranchSetup& setup, double t_end,
                        const std::function<void(const MultiPhaseState&)>& observe = {});
DichotomyReport dichotomy_experiment(const DichotomyConfig& config);

}  // namespace driftfluid
