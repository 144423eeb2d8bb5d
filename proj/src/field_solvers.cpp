#include "driftfluid/field_solvers.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "driftfluid/errors.hpp"

namespace driftfluid {

namespace {
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
}

SpectralField solve_phi(const SpectralField& rho, double epsilon) {
  if (epsilon < 0.0) throw ConfigurationError("solve_phi: epsilon must be >= 0");
  const Grid& g = rho.grid();
  SpectralField phi(g, rho.is_real());
  auto src = rho.coeffs();
  auto dst = phi.coeffs();
  const double eps2 = epsilon * epsilon;
  kernels::for_each(dst.size(), [&](std::size_t i) {
    const auto k = g.wavevector(i);
    const double kperp2 = double(k[0]) * k[0] + double(k[1]) * k[1];
    if (kperp2 == 0.0) {
      dst[i] = 0.0;  // the right-hand side ρ - ∫ρ dx⊥ vanishes here
      return;
    }
    dst[i] = src[i] / (kFourPiSq * (eps2 * double(k[2]) * k[2] + kperp2));
  });
  return phi;
}

PerpField perp_field(const SpectralField& phi) {
  return PerpField{-derivative(phi, Axis::perp2), derivative(phi, Axis::perp1)};
}

SpectralField solve_V(const SpectralField& rho_bar, double epsilon) {
  if (!rho_bar.grid().is_parallel_only())
    throw ConfigurationError("solve_V: density must be a parallel-only field");
  if (!(epsilon > 0.0)) throw ConfigurationError("solve_V: epsilon must be positive");
  const double mismatch = std::abs(rho_bar.mean() - 1.0);
  if (mismatch > 1e-8) {
    std::ostringstream os;
    os << "solve_V: perpendicular-averaged density has mean " << rho_bar.mean().real()
       << ", expected 1 (|mismatch| = " << mismatch << ")";
    throw SolvabilityError(os.str());
  }
  const Grid& g = rho_bar.grid();
  SpectralField V(g, rho_bar.is_real());
  for (std::size_t i = 1; i < V.size(); ++i) {
    const double k = g.wavevector(i)[2];
    V[i] = rho_bar[i] / (epsilon * kFourPiSq * k * k);
  }
  return V;
}

SpectralField parallel_field(const SpectralField& V) { return -derivative(V, Axis::parallel); }

SpectralField apply_phi_operator(const SpectralField& phi, double epsilon) {
  const Grid& g = phi.grid();
  SpectralField out(g, phi.is_real());
  const double eps2 = epsilon * epsilon;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto k = g.wavevector(i);
    out[i] = kFourPiSq * (eps2 * double(k[2]) * k[2] + double(k[0]) * k[0] + double(k[1]) * k[1]) *
             phi[i];
  }
  return out;
}

}  // namespace driftfluid
