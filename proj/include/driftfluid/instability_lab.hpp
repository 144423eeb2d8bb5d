#pragma once

#include <array>
#include <vector>

#include "driftfluid/limit_solver.hpp"
#include "driftfluid/random_fields.hpp"
#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// Two phases sharing the parallel line: densities ρ₁ and ρ₂ = 1 - ρ₁.
struct TwoPhaseState {
  double t = 0.0;
  SpectralField rho1;
  SpectralField v1;
  SpectralField v2;

  SpectralField rho2() const;
};

struct TwoPhaseTendency {
  SpectralField rho1;
  SpectralField v1;
  SpectralField v2;
  bool interior_breach = false;  ///< ρ₁ left (margin, 1 - margin)
};

/// ∂tρα + ∂∥(vαρα) = 0, ∂tvα + vα∂∥vα = -∂∥p, with the pressure making the
/// k∥ ≠ 0 modes of ∂t(ρ₁v₁ + ρ₂v₂) vanish (the limit closure on two phases).
TwoPhaseTendency two_phase_rhs(const TwoPhaseState& s, double margin = 1e-6);

/// RK4 step. Throws BlowUpError on non-finite values.
TwoPhaseState two_phase_step(const TwoPhaseState& s, double dt, double margin = 1e-6);

/// Exact embedding as a limit-solver shear state: x₁ is a collocation axis
/// of n1 points, the first half carrying (2ρ₁, v₁) and the second (2ρ₂, v₂).
LimitState embed_two_phase(const TwoPhaseState& s, int n1 = 4);
/// Inverse of embed_two_phase (reads columns 0 and n1/2).
TwoPhaseState extract_two_phase(const LimitState& s);

/// Mollified two-bump shear data: φ with ∂₁φ = 1 - ρ where ρ(x₁) concentrates
/// near x₁ = 1/4 and 3/4 with weights 2ρ₁ and 2ρ₂, and v = v₁ or v₂ by
/// bump. Used only as a cross-check of the discrete embedding.
LimitState mollified_two_phase(const TwoPhaseState& s, int n1, double width);

struct Background {
  double rho1 = 0.5;
  double v1 = 1.0;
  double v2 = -1.0;
};

/// 4×4 matrix A with ∂t(r₁, r₂, a, b) + A∂∥(r₁, r₂, a, b) = 0 for
/// perturbations of (ρ₁, ρ₂, v₁, v₂) around constants.
std::array<std::array<double, 4>, 4> linear_symbol(const Background& bg);

/// Eigenvalues σ of the mode e^{i2πkx∥} evolution, σ = -i2πk λ(A), sorted by
/// decreasing real part. Throws DomainError unless 0 < ρ̄₁ < 1.
std::array<cplx, 4> linear_growth(const Background& bg, int k);

struct GrowthConfig {
  Background background{};
  int npar = 64;
  double seed = 1e-8;       ///< amplitude of the ρ₁ cosine seed
  double t_end = 3.0;
  double dt = 1e-3;
  int harmonics = 4;        ///< harmonics of the seed mode kept; others are zeroed each step
  double window_low = 10.0;  ///< fit from window_low × seed ...
  double window_high = 1e-3;  ///< ... to this amplitude
};

struct GrowthRow {
  int k;
  double re_lin;
  double im_lin;
  double sigma_meas;
  double r_squared;
  int fit_points;
  bool window_reached;
  bool blew_up;
};

/// Seeds each mode 1..k_max separately on the background and fits the
/// exponential growth of |ρ₁(k)| in the nonlinear two-phase run.
std::vector<GrowthRow> growth_experiment(const GrowthConfig& config, int k_max);

/// Perturbation on the background with the given spectral profile and L²
/// norm, satisfying the momentum constraint: r₁ = profile, a = b = -(v̄₁ - v̄₂) r₁.
TwoPhaseState seeded_state(const Background& bg, int npar, const BandSpec& profile, double l2,
                           std::uint64_t seed);

struct DoublingResult {
  double t_double;  ///< first time the perturbation L² norm reaches 2× its initial value
  bool reached;
};

DoublingResult time_to_doubling(const TwoPhaseState& s0, const Background& bg, double t_end,
                                double dt);

/// Least-squares slope of log(y) against t with its R².
struct ExpFit {
  double rate;
  double r_squared;
  int points;
};
ExpFit fit_exponential(std::span<const double> t, std::span<const double> y);

}  // namespace driftfluid
