#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "driftfluid/grid.hpp"
#include "driftfluid/kernels.hpp"

namespace driftfluid {

/// Fourier coefficients of a periodic field on the unit torus,
/// F(k) = (1/ΠN) Σ_x f(x) e^{-i2πk·x}, stored in FFT index order.
///
/// Real fields keep Hermitian symmetry F(-k) = conj F(k). Complex fields
/// (corrector envelopes) clear the reality flag.
class SpectralField {
 public:
  explicit SpectralField(Grid grid, bool real = true);
  SpectralField(Grid grid, std::vector<cplx> coeffs, bool real);

  const Grid& grid() const { return grid_; }
  bool is_real() const { return real_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }

  /// Coefficient at wavevector k (any integers; wrapped modulo the grid).
  cplx at(int k1, int k2, int kpar) const;
  cplx& at(int k1, int k2, int kpar);

  /// Spatial mean, i.e. the k = 0 coefficient.
  cplx mean() const { return coeffs_[0]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  SpectralField operator-() const { return -1.0 * *this; }

  /// Largest coefficient modulus.
  double max_abs() const;
  /// Largest |F(-k) - conj F(k)|.
  double hermitian_defect() const;

 private:
  void require_same_grid(const SpectralField& o) const;

  Grid grid_;
  std::vector<cplx> coeffs_;
  bool real_;
};

/// Coefficients of a real grid function; the grid points are x_j = j/N_i.
SpectralField forward(const Grid& grid, std::span<const double> values);
/// Coefficients of a complex grid function; the result is flagged non-real.
SpectralField forward_complex(const Grid& grid, std::span<const cplx> values);

/// Grid values of a real field. Throws InvariantViolation when Hermitian
/// symmetry is broken.
std::vector<double> inverse(const SpectralField& f);
/// Grid values of any field, complex-valued.
std::vector<cplx> inverse_complex(const SpectralField& f);

/// Multiplies F(k) by i2πk_axis. Nyquist modes along `axis` are zeroed so real
/// fields stay real.
SpectralField derivative(const SpectralField& f, Axis axis);

/// Zeroes every mode outside the 2/3 band.
SpectralField dealias(SpectralField f);

/// Dealiased pseudo-spectral product. Inputs are truncated to the 2/3 band,
/// multiplied point-wise on the grid and truncated again; for band-limited
/// inputs this is the exact product restricted to the band.
SpectralField product(const SpectralField& f, const SpectralField& g);

/// Grid values of the 2/3-truncated field; input to product_from_values.
std::vector<cplx> dealiased_values(const SpectralField& f);
/// Dealiased coefficients of the point-wise product of two sets of grid values
/// obtained from dealiased_values. `real` drops the imaginary residue.
SpectralField product_from_values(const Grid& grid, std::span<const cplx> a,
                                  std::span<const cplx> b, bool real);

/// ∫ f dx_⊥ as a parallel-only field: the k_⊥ = 0 modes of f.
SpectralField perp_average(const SpectralField& f);
/// Embeds a parallel-only field in `grid`, constant across the perpendicular plane.
SpectralField broadcast(const SpectralField& parallel_field, const Grid& grid);
/// f - broadcast(perp_average(f)): the part with zero perpendicular mean.
SpectralField remove_perp_average(SpectralField f);

/// Mean-square norm (∫|f|²)^{1/2} by Parseval.
double l2_norm(const SpectralField& f);
/// ∫ f g dx for real fields by Parseval.
double inner(const SpectralField& f, const SpectralField& g);

/// Field with a single constant value.
SpectralField constant(const Grid& grid, double c);

}  // namespace driftfluid
