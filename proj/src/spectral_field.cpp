#include "driftfluid/spectral_field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include "driftfluid/errors.hpp"
#include "fft.hpp"

namespace driftfluid {

// ---------------------------------------------------------------- execution

namespace {
std::atomic<ExecutionMode> g_mode{ExecutionMode::parallel};
}

void set_execution_mode(ExecutionMode m) { g_mode.store(m); }
ExecutionMode execution_mode() { return g_mode.load(); }

void kernels::multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
  for_each(out.size(), [&](std::size_t i) { out[i] = a[i] * b[i]; });
}

void kernels::multiply_real(std::span<const cplx> a, std::span<const cplx> b,
                            std::span<cplx> out) {
  for_each(out.size(), [&](std::size_t i) {
    out[i] = cplx(a[i].real() * b[i].real() - a[i].imag() * b[i].imag(), 0.0);
  });
}

// --------------------------------------------------------------------- grid

std::string axis_label(Axis a) {
  switch (a) {
    case Axis::perp1: return "perp1";
    case Axis::perp2: return "perp2";
    case Axis::parallel: return "parallel";
  }
  return "?";
}

Grid::Grid(int n1, int n2, int npar) : dims_{n1, n2, npar} {
  for (int a = 0; a < 3; ++a) {
    const int n = dims_[a];
    if (n != 1 && (n < 4 || n % 2 != 0)) {
      std::ostringstream os;
      os << "grid axis " << axis_label(static_cast<Axis>(a)) << " has " << n
         << " points; expected 1 (absent) or an even count >= 4";
      throw ConfigurationError(os.str());
    }
  }
}

Grid Grid::with_collocation_axis(Axis a) const {
  Grid g = *this;
  g.dealias_[static_cast<int>(a)] = false;
  return g;
}

std::array<int, 3> Grid::wavevector(std::size_t flat_index) const {
  const int i3 = static_cast<int>(flat_index % dims_[2]);
  const std::size_t rest = flat_index / dims_[2];
  const int i2 = static_cast<int>(rest % dims_[1]);
  const int i1 = static_cast<int>(rest / dims_[1]);
  return {wavenumber(0, i1), wavenumber(1, i2), wavenumber(2, i3)};
}

std::size_t Grid::mirror(std::size_t flat_index) const {
  const auto k = wavevector(flat_index);
  return flat(index_of(0, -k[0]), index_of(1, -k[1]), index_of(2, -k[2]));
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dims_[0] << "x" << dims_[1] << "x" << dims_[2];
  return os.str();
}

// ------------------------------------------------------------ SpectralField

SpectralField::SpectralField(Grid grid, bool real)
    : grid_(grid), coeffs_(grid.size(), cplx(0.0, 0.0)), real_(real) {}

SpectralField::SpectralField(Grid grid, std::vector<cplx> coeffs, bool real)
    : grid_(grid), coeffs_(std::move(coeffs)), real_(real) {
  if (coeffs_.size() != grid_.size())
    throw ConfigurationError("coefficient count does not match grid " + grid_.describe());
}

cplx SpectralField::at(int k1, int k2, int kpar) const {
  return coeffs_[grid_.flat(grid_.index_of(0, k1), grid_.index_of(1, k2), grid_.index_of(2, kpar))];
}

cplx& SpectralField::at(int k1, int k2, int kpar) {
  return coeffs_[grid_.flat(grid_.index_of(0, k1), grid_.index_of(1, k2), grid_.index_of(2, kpar))];
}

void SpectralField::require_same_grid(const SpectralField& o) const {
  if (!grid_.same_shape(o.grid_))
    throw ConfigurationError("grid mismatch: " + grid_.describe() + " vs " + o.grid_.describe());
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(o);
  kernels::for_each(coeffs_.size(), [&](std::size_t i) { coeffs_[i] += o.coeffs_[i]; });
  real_ = real_ && o.real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(o);
  kernels::for_each(coeffs_.size(), [&](std::size_t i) { coeffs_[i] -= o.coeffs_[i]; });
  real_ = real_ && o.real_;
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  kernels::for_each(coeffs_.size(), [&](std::size_t i) { coeffs_[i] *= s; });
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(o);
  kernels::for_each(coeffs_.size(), [&](std::size_t i) { coeffs_[i] += s * o.coeffs_[i]; });
  real_ = real_ && o.real_;
  return *this;
}

double SpectralField::max_abs() const {
  return kernels::max(coeffs_.size(), [&](std::size_t i) { return std::abs(coeffs_[i]); }, 0.0);
}

double SpectralField::hermitian_defect() const {
  return kernels::max(
      coeffs_.size(),
      [&](std::size_t i) { return std::abs(coeffs_[grid_.mirror(i)] - std::conj(coeffs_[i])); },
      0.0);
}

// ---------------------------------------------------------------- transforms

SpectralField forward_complex(const Grid& grid, std::span<const cplx> values) {
  if (values.size() != grid.size())
    throw ConfigurationError("value count " + std::to_string(values.size()) +
                             " does not match grid " + grid.describe());
  std::vector<cplx> c(values.begin(), values.end());
  detail::fft_inplace(grid, c, -1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  kernels::for_each(c.size(), [&](std::size_t i) { c[i] *= scale; });
  return SpectralField(grid, std::move(c), false);
}

SpectralField forward(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw ConfigurationError("value count " + std::to_string(values.size()) +
                             " does not match grid " + grid.describe());
  std::vector<cplx> c(values.size());
  kernels::for_each(c.size(), [&](std::size_t i) { c[i] = cplx(values[i], 0.0); });
  detail::fft_inplace(grid, c, -1);
  const double scale = 1.0 / static_cast<double>(grid.size());
  kernels::for_each(c.size(), [&](std::size_t i) { c[i] *= scale; });
  return SpectralField(grid, std::move(c), true);
}

std::vector<cplx> inverse_complex(const SpectralField& f) {
  std::vector<cplx> v(f.coeffs().begin(), f.coeffs().end());
  detail::fft_inplace(f.grid(), v, +1);
  return v;
}

std::vector<double> inverse(const SpectralField& f) {
  const double scale = std::max(f.max_abs(), 1e-300);
  const double defect = f.hermitian_defect();
  if (defect > 1e-11 * scale) {
    std::ostringstream os;
    os << "inverse of a field without Hermitian symmetry (defect " << defect << ")";
    throw InvariantViolation(os.str());
  }
  const auto v = inverse_complex(f);
  std::vector<double> out(v.size());
  kernels::for_each(v.size(), [&](std::size_t i) { out[i] = v[i].real(); });
  return out;
}

// -------------------------------------------------------------- operations

SpectralField derivative(const SpectralField& f, Axis axis) {
  SpectralField d(f.grid(), f.is_real());
  const Grid& g = f.grid();
  const int a = static_cast<int>(axis);
  const double two_pi = 2.0 * std::numbers::pi;
  auto src = f.coeffs();
  auto dst = d.coeffs();
  kernels::for_each(dst.size(), [&](std::size_t i) {
    const int k = g.wavevector(i)[a];
    if (g.n(axis) > 1 && 2 * k == -g.n(axis)) {
      dst[i] = 0.0;
    } else {
      dst[i] = cplx(0.0, two_pi * k) * src[i];
    }
  });
  return d;
}

SpectralField dealias(SpectralField f) {
  const Grid& g = f.grid();
  auto c = f.coeffs();
  kernels::for_each(c.size(), [&](std::size_t i) {
    if (!g.inside_dealias_band(g.wavevector(i))) c[i] = 0.0;
  });
  return f;
}

std::vector<cplx> dealiased_values(const SpectralField& f) { return inverse_complex(dealias(f)); }

SpectralField product_from_values(const Grid& grid, std::span<const cplx> a,
                                  std::span<const cplx> b, bool real) {
  if (a.size() != grid.size() || b.size() != grid.size())
    throw ConfigurationError("product_from_values: value count does not match grid");
  std::vector<cplx> prod(grid.size());
  if (real)
    kernels::multiply_real(a, b, prod);
  else
    kernels::multiply(a, b, prod);
  SpectralField out = forward_complex(grid, prod);
  if (real) {
    // Restore exact Hermitian symmetry lost to roundoff.
    auto c = out.coeffs();
    std::vector<cplx> sym(c.size());
    kernels::for_each(c.size(), [&](std::size_t i) {
      sym[i] = 0.5 * (c[i] + std::conj(c[grid.mirror(i)]));
    });
    out = SpectralField(grid, std::move(sym), true);
  }
  return dealias(std::move(out));
}

SpectralField product(const SpectralField& f, const SpectralField& g) {
  if (!f.grid().same_shape(g.grid()))
    throw ConfigurationError("product of fields on different grids: " + f.grid().describe() +
                             " vs " + g.grid().describe());
  const auto a = dealiased_values(f);
  const auto b = dealiased_values(g);
  return product_from_values(f.grid(), a, b, f.is_real() && g.is_real());
}

SpectralField perp_average(const SpectralField& f) {
  const Grid& g = f.grid();
  SpectralField p(g.parallel_reduction(), f.is_real());
  const int npar = g.n(Axis::parallel);
  for (int i = 0; i < npar; ++i) p[static_cast<std::size_t>(i)] = f[g.flat(0, 0, i)];
  return p;
}

SpectralField broadcast(const SpectralField& parallel_field, const Grid& grid) {
  if (!parallel_field.grid().is_parallel_only() ||
      parallel_field.grid().n(Axis::parallel) != grid.n(Axis::parallel))
    throw ConfigurationError("broadcast needs a parallel-only field with " +
                             std::to_string(grid.n(Axis::parallel)) + " parallel points");
  SpectralField out(grid, parallel_field.is_real());
  for (int i = 0; i < grid.n(Axis::parallel); ++i)
    out[grid.flat(0, 0, i)] = parallel_field[static_cast<std::size_t>(i)];
  return out;
}

SpectralField remove_perp_average(SpectralField f) {
  const Grid& g = f.grid();
  for (int i = 0; i < g.n(Axis::parallel); ++i) f[g.flat(0, 0, i)] = 0.0;
  return f;
}

double l2_norm(const SpectralField& f) {
  auto c = f.coeffs();
  return std::sqrt(kernels::sum(c.size(), [&](std::size_t i) { return std::norm(c[i]); }));
}

double inner(const SpectralField& f, const SpectralField& g) {
  if (!f.grid().same_shape(g.grid())) throw ConfigurationError("inner product grid mismatch");
  auto a = f.coeffs();
  auto b = g.coeffs();
  return kernels::sum(a.size(), [&](std::size_t i) { return (a[i] * std::conj(b[i])).real(); });
}

SpectralField constant(const Grid& grid, double c) {
  SpectralField f(grid, true);
  f[0] = c;
  return f;
}

}  // namespace driftfluid
