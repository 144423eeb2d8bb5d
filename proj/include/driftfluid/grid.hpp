#pragma once

#include <array>
#include <cstddef>
#include <cstdlib>
#include <string>

namespace driftfluid {

enum class Axis : int { perp1 = 0, perp2 = 1, parallel = 2 };

std::string axis_label(Axis a);

/// Mode counts of a periodic grid on the unit torus, ordered (perp1, perp2, parallel).
///
/// An axis with a single point is absent: the field is constant along it. This
/// is how the T¹ and T² reductions are represented. Present axes must carry an
/// even count >= 4.
///
/// Axes are dealiased by the 2/3 rule unless marked as collocation axes. A
/// collocation axis is never differentiated; its grid points act as independent
/// parameters (used by shear-flow runs where x1 labels fluid phases).
class Grid {
 public:
  Grid(int n1, int n2, int npar);

  static Grid parallel_only(int npar) { return Grid(1, 1, npar); }

  int n(Axis a) const { return dims_[static_cast<int>(a)]; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  bool is_parallel_only() const { return dims_[0] == 1 && dims_[1] == 1; }

  /// Grid of the same parallel resolution with both perpendicular axes removed.
  Grid parallel_reduction() const { return Grid(1, 1, dims_[2]); }

  Grid with_collocation_axis(Axis a) const;
  bool is_dealiased(Axis a) const { return dealias_[static_cast<int>(a)]; }

  /// Signed wavenumber stored at FFT index i on axis a.
  int wavenumber(int axis, int i) const {
    const int n = dims_[axis];
    return 2 * i < n ? i : i - n;
  }
  int index_of(int axis, int k) const {
    const int n = dims_[axis];
    return ((k % n) + n) % n;
  }
  std::size_t flat(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * dims_[1] + i2) * dims_[2] + i3;
  }
  /// Wavevector of a flat index.
  std::array<int, 3> wavevector(std::size_t flat_index) const;
  /// Flat index of the mode -k.
  std::size_t mirror(std::size_t flat_index) const;

  /// True when |k_i| is strictly below n_i/3 on every dealiased axis.
  bool inside_dealias_band(const std::array<int, 3>& k) const {
    for (int a = 0; a < 3; ++a)
      if (dealias_[a] && 3 * std::abs(k[a]) >= dims_[a] && dims_[a] > 1) return false;
    return true;
  }
  /// True when k sits on a Nyquist index of some present axis.
  bool is_nyquist(const std::array<int, 3>& k) const {
    for (int a = 0; a < 3; ++a)
      if (dims_[a] > 1 && 2 * k[a] == -dims_[a]) return true;
    return false;
  }

  bool operator==(const Grid& o) const { return dims_ == o.dims_ && dealias_ == o.dealias_; }
  bool same_shape(const Grid& o) const { return dims_ == o.dims_; }

  std::string describe() const;

 private:
  std::array<int, 3> dims_;
  std::array<bool, 3> dealias_{true, true, true};
};

}  // namespace driftfluid
