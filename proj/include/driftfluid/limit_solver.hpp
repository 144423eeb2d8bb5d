#pragma once

#include <functional>
#include <optional>

#include "driftfluid/field_solvers.hpp"
#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// State of the quasineutral limit system.
struct LimitState {
  double t = 0.0;
  SpectralField rho;
  SpectralField v;
  /// Latched when the constraint residual exceeds LimitConfig::constraint_tolerance.
  bool constraint_flag = false;
};

struct LimitConfig {
  /// Use the recovered pressure; false integrates with p = 0 for comparison.
  bool pressure_closure = true;
  double cfl = 0.5;
  double constraint_tolerance = 1e-8;
};

/// ∂∥p = -∂∥ ∫ρv² dx⊥, a parallel-only field with zero mean. The solver uses
/// the discrete counterpart that keeps ∂∥∫ρv dx⊥ = 0 exactly.
SpectralField pressure_gradient(const SpectralField& rho, const SpectralField& v);

/// E⊥ = ∇^⊥Δ⊥⁻¹(ρ - ∫ρ dx⊥) written as -∇^⊥φ with -Δ⊥φ = ρ - ∫ρ dx⊥.
PerpField limit_perp_field(const SpectralField& rho);

/// L² size of ∂∥∫ρv dx⊥.
double constraint_residual(const SpectralField& rho, const SpectralField& v);
/// L² size of the k⊥ = 0, k∥ ≠ 0 part of ρ.
double density_constraint_residual(const SpectralField& rho);

/// Projects data onto the constraint set: drops the k⊥ = 0, k∥ ≠ 0 modes of ρ,
/// pins the mean to 1 and replaces v by v - (∫ρv dx⊥ - mean)/∫ρ dx⊥.
/// Throws DomainError when ρ₀ is not positive on the grid.
LimitState project_initial(SpectralField rho0, SpectralField v0);

/// Shear data from a potential φ(x₁, x∥) and velocity v(x₁, x∥) with no x₂
/// dependence: ρ₀ = 1 - ∂₁φ, then projected. The perpendicular drift
/// E⊥ = (0, ∂₁φ) transports nothing because nothing depends on x₂.
LimitState shear_flow(const SpectralField& phi_profile, const SpectralField& v_profile);

struct LimitTendency {
  SpectralField rho;
  SpectralField v;
};

class LimitSolver {
 public:
  explicit LimitSolver(LimitConfig config = {});
  const LimitConfig& config() const { return config_; }

  LimitTendency rhs(const LimitState& s) const;
  /// RK4 step, pressure recomputed at every stage. Throws BlowUpError.
  LimitState step(const LimitState& s, double dt) const;
  double dt_max(const LimitState& s) const;

  using Observer = std::function<void(const LimitState&)>;
  LimitState integrate(LimitState s, double t_end, std::optional<double> dt = std::nullopt,
                       const Observer& observe = {}) const;

 private:
  LimitConfig config_;
};

}  // namespace driftfluid
