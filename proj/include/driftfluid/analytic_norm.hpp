#pragma once

#include <span>
#include <vector>

#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// Parameters of the shrinking-strip norm.
struct NormParams {
  double delta0 = 1.5;  ///< analyticity radius, > 1
  double delta = 1.2;   ///< evaluation radius in (1, delta0]
  double eta = 0.1;     ///< time-shrink rate, > 0
  double beta = 0.5;    ///< exponent in (0, 1)

  /// Throws ConfigurationError unless 1 < delta <= delta0, eta > 0, 0 < beta < 1.
  void validate() const;
  /// Admissible time window [0, eta (delta0 - 1)).
  double time_limit() const { return eta * (delta0 - 1.0); }
};

/// Σ_k |F(k)| δ^{|k|₁}. Returns +∞ when the weighted sum overflows.
double analytic_norm(const SpectralField& f, double delta);

/// Σ_k |F(k)| |k|₁ δ^{|k|₁}: the analytic norm of the gradient without the 2π
/// factor of the Fourier convention, i.e. Σ_i |∂_i f|_δ / (2π).
double gradient_analytic_norm(const SpectralField& f, double delta);

struct TimedField {
  double t;
  SpectralField field;
};

/// Default δ-grid: 16 geometric points δ₀^{j/16}, j = 1..16, in (1, δ₀].
std::vector<double> default_delta_grid(double delta0, int points = 16);

/// Discrete sup over samples and the δ-grid of
///   |u(t)|_δ + (δ₀ - δ - t/η)^β |∇u(t)|_δ,  restricted to t <= η(δ₀ - δ).
/// Throws DomainError when a sample lies outside [0, η(δ₀ - 1)).
double shrinking_norm(std::span<const TimedField> trajectory, const NormParams& params,
                      std::span<const double> delta_grid);
double shrinking_norm(std::span<const TimedField> trajectory, const NormParams& params);

}  // namespace driftfluid
