#include "driftfluid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "driftfluid/errors.hpp"

namespace driftfluid {

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

CumulativeIntegral::CumulativeIntegral(std::span<const cplx> samples, double t0, double dt,
                                       double omega)
    : samples_(samples.begin(), samples.end()), t0_(t0), dt_(dt), omega_(omega) {
  if (samples_.empty()) throw ConfigurationError("CumulativeIntegral: no samples");
  if (samples_.size() > 1 && !(dt > 0.0))
    throw ConfigurationError("CumulativeIntegral: sample spacing must be positive");
  cumulative_.resize(samples_.size());
  cumulative_[0] = 0.0;
  for (std::size_t j = 0; j + 1 < samples_.size(); ++j)
    cumulative_[j + 1] = cumulative_[j] + segment(j, 0.0, 1.0);
}

std::size_t CumulativeIntegral::stencil_start(std::size_t j) const {
  const std::size_t m = samples_.size();
  if (m <= 4) return 0;
  std::size_t s = j == 0 ? 0 : j - 1;
  if (s + 4 > m) s = m - 4;
  return s;
}

cplx CumulativeIntegral::interpolate(double t) const {
  const std::size_t m = samples_.size();
  if (m == 1) return samples_[0];
  double u = (t - t0_) / dt_;
  auto j = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, double(m - 2)));
  const std::size_t s = stencil_start(j);
  const std::size_t npts = std::min<std::size_t>(4, m);
  cplx acc = 0.0;
  for (std::size_t a = 0; a < npts; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < npts; ++b)
      if (b != a) w *= (u - double(s + b)) / double(static_cast<long>(a) - static_cast<long>(b));
    acc += w * samples_[s + a];
  }
  return acc;
}

// ∫ over [t_j + a dt, t_j + b dt], 0 <= a <= b <= 1.
cplx CumulativeIntegral::segment(std::size_t j, double a, double b) const {
  const GaussRule& g = gauss_legendre(8);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  cplx acc = 0.0;
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double local = mid + half * g.nodes[q];
    const double t = t0_ + (double(j) + local) * dt_;
    const cplx phase = omega_ == 0.0 ? cplx(1.0, 0.0) : std::polar(1.0, omega_ * t);
    acc += g.weights[q] * phase * interpolate(t);
  }
  return acc * half * dt_;
}

cplx CumulativeIntegral::at(double t) const {
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end()));
  if (t < t0_ - eps || t > t_end() + eps)
    throw DomainError("CumulativeIntegral: time outside sampled range");
  if (samples_.size() == 1) return 0.0;
  const double u = std::clamp((t - t0_) / dt_, 0.0, double(samples_.size() - 1));
  auto j = static_cast<std::size_t>(std::floor(u));
  if (j >= samples_.size() - 1) return cumulative_.back();
  const double frac = u - double(j);
  if (frac < 1e-14) return cumulative_[j];
  return cumulative_[j] + segment(j, 0.0, frac);
}

}  // namespace driftfluid
