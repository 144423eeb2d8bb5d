#include "driftfluid/analytic_norm.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "driftfluid/errors.hpp"

namespace driftfluid {

void NormParams::validate() const {
  std::ostringstream os;
  if (!(delta0 > 1.0)) os << "delta0 must exceed 1; ";
  if (!(delta > 1.0 && delta <= delta0)) os << "delta must lie in (1, delta0]; ";
  if (!(eta > 0.0)) os << "eta must be positive; ";
  if (!(beta > 0.0 && beta < 1.0)) os << "beta must lie in (0, 1); ";
  if (!os.str().empty()) throw ConfigurationError("norm parameters: " + os.str());
}

namespace {

// Σ |F(k)| w(|k|₁) δ^{|k|₁}, saturating at +inf.
template <class Weight>
double weighted_sum(const SpectralField& f, double delta, Weight&& w) {
  const Grid& g = f.grid();
  auto c = f.coeffs();
  const double log_delta = std::log(delta);
  const double s = kernels::sum(c.size(), [&](std::size_t i) {
    const double a = std::abs(c[i]);
    if (a == 0.0) return 0.0;
    const auto k = g.wavevector(i);
    const int len = std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]);
    const double weight = w(len);
    if (weight == 0.0) return 0.0;
    return a * weight * std::exp(len * log_delta);
  });
  return std::isnan(s) ? std::numeric_limits<double>::infinity() : s;
}

}  // namespace

double analytic_norm(const SpectralField& f, double delta) {
  return weighted_sum(f, delta, [](int) { return 1.0; });
}

double gradient_analytic_norm(const SpectralField& f, double delta) {
  return weighted_sum(f, delta, [](int len) { return static_cast<double>(len); });
}

std::vector<double> default_delta_grid(double delta0, int points) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int j = 1; j <= points; ++j)
    grid.push_back(std::pow(delta0, static_cast<double>(j) / points));
  return grid;
}

double shrinking_norm(std::span<const TimedField> trajectory, const NormParams& params,
                      std::span<const double> delta_grid) {
  if (!(params.delta0 > 1.0) || !(params.eta > 0.0) || !(params.beta > 0.0 && params.beta < 1.0))
    throw ConfigurationError("shrinking_norm: invalid norm parameters");
  const double t_max = params.time_limit();
  for (const auto& s : trajectory) {
    if (s.t < 0.0 || s.t >= t_max) {
      std::ostringstream os;
      os << "shrinking_norm: sample time " << s.t << " outside [0, " << t_max << ")";
      throw DomainError(os.str());
    }
  }
  double sup = 0.0;
  for (double delta : delta_grid) {
    if (!(delta > 1.0 && delta <= params.delta0))
      throw ConfigurationError("shrinking_norm: delta-grid point outside (1, delta0]");
    for (const auto& s : trajectory) {
      const double gap = params.delta0 - delta - s.t / params.eta;
      if (gap < 0.0) continue;
      double value = analytic_norm(s.field, delta);
      if (gap > 0.0) value += std::pow(gap, params.beta) * gradient_analytic_norm(s.field, delta);
      sup = std::max(sup, value);
    }
  }
  return sup;
}

double shrinking_norm(std::span<const TimedField> trajectory, const NormParams& params) {
  const auto grid = default_delta_grid(params.delta0);
  return shrinking_norm(trajectory, params, grid);
}

}  // namespace driftfluid
