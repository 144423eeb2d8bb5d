#pragma once

#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// Perpendicular drift field E⊥ = -∇^⊥φ = (-∂₂φ, ∂₁φ).
struct PerpField {
  SpectralField e1;
  SpectralField e2;
};

/// Solves -ε²∂∥²φ - Δ⊥φ = ρ - ∫ρ dx⊥ mode by mode:
///   F φ(k) = F ρ'(k) / ((2π)² (ε² k∥² + |k⊥|²)),  k⊥ ≠ 0,
/// with every k⊥ = 0 mode set to zero. ε = 0 gives the limit inversion of Δ⊥.
SpectralField solve_phi(const SpectralField& rho, double epsilon);

/// E⊥ = -∇^⊥φ.
PerpField perp_field(const SpectralField& phi);

/// Solves -ε∂∥²V = ρ̄ - 1 for a parallel-only density ρ̄ with mean 1; V has
/// zero mean. Throws SolvabilityError when |mean(ρ̄) - 1| > 1e-8.
SpectralField solve_V(const SpectralField& rho_bar, double epsilon);

/// E∥ = -∂∥V.
SpectralField parallel_field(const SpectralField& V);

/// Applies the forward operator -ε²∂∥² - Δ⊥ spectrally.
SpectralField apply_phi_operator(const SpectralField& phi, double epsilon);

/// True when ∇⊥·(E⊥ f) vanishes for every f because a perpendicular axis is
/// absent: with no x₂ dependence E₁ = -∂₂φ = 0 and ∂₂ kills the rest.
inline bool perp_transport_vanishes(const Grid& g) {
  return g.n(Axis::perp1) == 1 || g.n(Axis::perp2) == 1;
}

}  // namespace driftfluid
