#pragma once

#include <cstdint>
#include <random>

#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

enum class DecayKind { flat, analytic, algebraic };

/// Spectral envelope of a random band-limited field: |F(k)| ∝ r^{|k|₁}
/// (analytic) or |k|₁^{-s} (algebraic) or 1 (flat), on |k_i| <= kmax.
struct BandSpec {
  int kmax = 2;
  double amplitude = 1.0;  ///< target L² norm of the fluctuation
  DecayKind decay = DecayKind::flat;
  double rate = 0.5;       ///< r for analytic, s for algebraic
  bool zero_mean = true;
};

/// Random real field with Hermitian-symmetric coefficients inside the band.
/// Deterministic for a given generator state.
SpectralField random_band_field(const Grid& grid, const BandSpec& spec, std::mt19937_64& rng);

}  // namespace driftfluid
