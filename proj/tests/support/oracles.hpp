#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's transforms or solvers; only Grid index helpers are shared.

#include <complex>
#include <functional>
#include <vector>

#include "driftfluid/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;
using driftfluid::Grid;

/// (1/N) Σ_x f(x) e^{-i2πk·x} by direct summation, stored in FFT index order.
std::vector<cplx> dft(const Grid& g, const std::vector<cplx>& values);
std::vector<cplx> dft(const Grid& g, const std::vector<double>& values);
/// Σ_k F(k) e^{i2πk·x} at the grid points.
std::vector<cplx> idft(const Grid& g, const std::vector<cplx>& coeffs);

/// Coefficients of f·g by direct convolution of coefficient arrays, keeping
/// result wavevectors representable on the grid (no wrap-around).
std::vector<cplx> convolve(const Grid& g, const std::vector<cplx>& f, const std::vector<cplx>& h);

/// Zero every coefficient outside the 2/3 band on axes with more than one point.
void truncate_band(const Grid& g, std::vector<cplx>& c);

/// 8th-order centred difference along `axis` of a periodic grid function.
std::vector<double> fd_derivative(const Grid& g, const std::vector<double>& values, int axis);

/// Derivative along `axis` by direct DFT, multiplication by i2πk and direct
/// series evaluation. Nyquist modes are dropped.
std::vector<double> dft_derivative(const Grid& g, const std::vector<double>& values, int axis);

/// Solves -(a∂₁² + a∂₂² + b∂∥²)u = f mode by mode via direct DFT, zeroing the
/// modes where the symbol vanishes or `keep(k)` is false.
std::vector<double> dft_solve(const Grid& g, const std::vector<double>& f, double a, double b,
                              const std::function<bool(int, int, int)>& keep);

/// Grid point values f(x1, x2, xpar) for x_i = j/N_i.
std::vector<double> sample(const Grid& g, const std::function<double(double, double, double)>& f);

/// Classical RK4 for y' = f(t, y) on a vector of complex numbers.
using OdeRhs = std::function<std::vector<cplx>(double, const std::vector<cplx>&)>;
std::vector<cplx> rk4(const OdeRhs& f, std::vector<cplx> y, double t0, double t1, int steps);

/// Two-dimensional incompressible Euler in vorticity form on an n1 × n2
/// torus, ∂tω + u·∇ω = 0, u = (-∂₂ψ, ∂₁ψ), -Δψ = ω, with a passive scalar
/// c transported by the same u. Spectral in space with 2/3 truncation,
/// naive transforms, RK4 in time.
class Euler2d {
 public:
  Euler2d(int n1, int n2);
  /// Coefficients in (k1, k2) FFT order.
  struct State {
    std::vector<cplx> omega;
    std::vector<cplx> c;
  };
  State rhs(const State& s) const;
  State step(const State& s, double dt) const;

 private:
  std::vector<cplx> derivative(const std::vector<cplx>& f, int axis) const;
  std::vector<cplx> to_grid(const std::vector<cplx>& f) const;
  std::vector<cplx> from_grid(const std::vector<cplx>& v) const;
  int n1_, n2_;
  std::vector<cplx> w1_, w2_;  // twiddles
};

}  // namespace oracle
