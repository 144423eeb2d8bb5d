#pragma once

#include <functional>
#include <optional>

#include "driftfluid/errors.hpp"
#include "driftfluid/field_solvers.hpp"
#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// State of the ε-dependent drift-fluid system.
///
/// `G` is the running time integral of E∥ = -∂∥V (parallel-only), carried as
/// an extra ODE component so it is advanced by the same Runge-Kutta stages as
/// ρ and v. `positivity_warning` latches once min ρ <= 0 on the grid.
struct EpsState {
  double t = 0.0;
  double epsilon = 1.0;
  SpectralField rho;
  SpectralField v;
  SpectralField G;
  bool positivity_warning = false;

  /// w = v - G, the velocity with the plasma oscillation filtered out.
  SpectralField filtered_velocity() const;
};

/// Potentials and forces recomputed from ρ.
struct EpsFields {
  SpectralField phi;            ///< 3D, zero k⊥ = 0 modes
  PerpField e_perp;             ///< -∇^⊥φ
  SpectralField eps_dpar_phi;   ///< ε∂∥φ
  SpectralField V;              ///< parallel-only
  SpectralField e_par;          ///< -∂∥V, parallel-only
};

EpsFields solve_eps_fields(const SpectralField& rho, double epsilon);

struct EpsTendency {
  SpectralField rho;
  SpectralField v;
  SpectralField G;
  bool positivity_breach = false;
};

struct EpsConfig {
  double epsilon = 0.1;
  double cfl = 0.5;
  /// Oscillation samples per period 2π√ε in the default time step.
  double samples_per_period = 40.0;
  /// Admissibility: |∫ρ(0)dx⊥ - 1|_{δ₀} <= C √ε.
  double admissibility_constant = 1.0;
  double admissibility_delta = 1.5;
};

struct EpsDiagnostics {
  double t;
  double mass;
  double energy;
  double min_rho;
  double norm_rho;         ///< |ρ|_δ
  double norm_rho_fluct;   ///< |ρ - 1|_δ
  double norm_v;           ///< |v|_δ
  double norm_sqrt_eps_e;  ///< |√ε E∥|_δ
};

/// Thrown by EpsSolver::step when the state stops being finite.
class EpsBlowUpError : public BlowUpError {
 public:
  EpsBlowUpError(const std::string& what, EpsState last_valid)
      : BlowUpError(what, last_valid.t), last_valid_(std::move(last_valid)) {}
  const EpsState& last_valid() const { return last_valid_; }

 private:
  EpsState last_valid_;
};

class EpsSolver {
 public:
  explicit EpsSolver(EpsConfig config);

  const EpsConfig& config() const { return config_; }
  double epsilon() const { return config_.epsilon; }

  /// Builds an initial state: dealiases, pins the mean of ρ to 1 and checks
  /// admissibility. Throws DomainError on an inadmissible parallel charge
  /// imbalance or a mean far from 1.
  EpsState make_state(SpectralField rho0, SpectralField v0) const;
  /// Same without the admissibility bound (used for deliberately
  /// ill-prepared data in tests).
  EpsState make_state_unchecked(SpectralField rho0, SpectralField v0) const;

  EpsTendency rhs(const EpsState& s) const;

  /// Classical RK4 step; re-pins mean(ρ) = 1. Throws EpsBlowUpError.
  EpsState step(const EpsState& s, double dt) const;

  /// min(advective CFL bound, 2π√ε / samples_per_period).
  double dt_max(const EpsState& s) const;
  double oscillation_dt() const;

  double energy(const EpsState& s) const;
  EpsDiagnostics diagnostics(const EpsState& s, double delta) const;

  using Observer = std::function<void(const EpsState&)>;
  /// Integrates to t_end with a uniform step no larger than `dt` (or
  /// dt_max(s) when dt is empty), calling `observe` on the initial state and
  /// after every step.
  EpsState integrate(EpsState s, double t_end, std::optional<double> dt = std::nullopt,
                     const Observer& observe = {}) const;

 private:
  EpsConfig config_;
};

double min_on_grid(const SpectralField& f);

}  // namespace driftfluid
