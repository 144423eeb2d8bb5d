#include "driftfluid/random_fields.hpp"

#include <cmath>

#include "driftfluid/errors.hpp"

namespace driftfluid {

SpectralField random_band_field(const Grid& grid, const BandSpec& spec, std::mt19937_64& rng) {
  if (spec.kmax < 0) throw ConfigurationError("random_band_field: kmax must be >= 0");
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid, true);
  const auto& d = grid.dims();
  auto limit = [&](int a) { return d[a] == 1 ? 0 : std::min(spec.kmax, d[a] / 2 - 1); };
  // Draw over a half space and mirror, so the field is real by construction.
  for (int k1 = -limit(0); k1 <= limit(0); ++k1)
    for (int k2 = -limit(1); k2 <= limit(1); ++k2)
      for (int k3 = -limit(2); k3 <= limit(2); ++k3) {
        const bool upper = k1 > 0 || (k1 == 0 && (k2 > 0 || (k2 == 0 && k3 > 0)));
        if (!upper) continue;
        const int len = std::abs(k1) + std::abs(k2) + std::abs(k3);
        double env = 1.0;
        if (spec.decay == DecayKind::analytic) env = std::pow(spec.rate, len);
        if (spec.decay == DecayKind::algebraic) env = std::pow(static_cast<double>(len), -spec.rate);
        const cplx c(env * normal(rng), env * normal(rng));
        f.at(k1, k2, k3) = c;
        f.at(-k1, -k2, -k3) = std::conj(c);
      }
  if (!spec.zero_mean) f[0] = normal(rng);
  const double norm = l2_norm(f);
  if (norm > 0.0) f *= spec.amplitude / norm;
  return f;
}

}  // namespace driftfluid
