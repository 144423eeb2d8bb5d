#pragma once

#include <span>
#include <vector>

#include "driftfluid/kernels.hpp"

namespace driftfluid {

/// Running integral I(t) = ∫_{t0}^{t} e^{iωs} y(s) ds of uniformly sampled data.
///
/// y is reconstructed by piecewise cubic Lagrange interpolation through the
/// four nearest samples, and each sub-interval is integrated against the
/// oscillatory factor with 8-point Gauss-Legendre. The oscillation is thus
/// handled exactly up to the Gauss rule, and the error is fourth order in the
/// sample spacing for smooth y.
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::span<const cplx> samples, double t0, double dt, double omega = 0.0);

  std::size_t size() const { return cumulative_.size(); }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double t_end() const { return t0_ + dt_ * static_cast<double>(samples_.size() - 1); }

  /// Integral up to sample j.
  cplx at_sample(std::size_t j) const { return cumulative_[j]; }
  /// Integral up to any t in [t0, t_end].
  cplx at(double t) const;

  /// Interpolated y(t) (without the oscillatory factor).
  cplx interpolate(double t) const;

 private:
  cplx segment(std::size_t j, double a, double b) const;
  std::size_t stencil_start(std::size_t j) const;

  std::vector<cplx> samples_;
  double t0_;
  double dt_;
  double omega_;
  std::vector<cplx> cumulative_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

}  // namespace driftfluid
