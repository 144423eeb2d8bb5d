#include "oracles.hpp"

#include <cmath>
#include <numbers>

namespace oracle {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::array<int, 3> kvec(const Grid& g, std::size_t flat) {
  const auto& d = g.dims();
  const int i3 = int(flat % d[2]);
  const int i2 = int((flat / d[2]) % d[1]);
  const int i1 = int(flat / (std::size_t(d[2]) * d[1]));
  return {g.wavenumber(0, i1), g.wavenumber(1, i2), g.wavenumber(2, i3)};
}

std::array<int, 3> point(const Grid& g, std::size_t flat) {
  const auto& d = g.dims();
  return {int(flat / (std::size_t(d[2]) * d[1])), int((flat / d[2]) % d[1]), int(flat % d[2])};
}

}  // namespace

std::vector<cplx> dft(const Grid& g, const std::vector<cplx>& values) {
  const auto& d = g.dims();
  const std::size_t n = g.size();
  std::vector<cplx> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto k = kvec(g, a);
    cplx acc = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const auto x = point(g, b);
      double phase = 0.0;
      for (int ax = 0; ax < 3; ++ax) phase += double(k[ax]) * x[ax] / d[ax];
      acc += values[b] * std::polar(1.0, -two_pi * phase);
    }
    out[a] = acc / double(n);
  }
  return out;
}

std::vector<cplx> dft(const Grid& g, const std::vector<double>& values) {
  return dft(g, std::vector<cplx>(values.begin(), values.end()));
}

std::vector<cplx> idft(const Grid& g, const std::vector<cplx>& coeffs) {
  const auto& d = g.dims();
  const std::size_t n = g.size();
  std::vector<cplx> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    const auto x = point(g, b);
    cplx acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const auto k = kvec(g, a);
      double phase = 0.0;
      for (int ax = 0; ax < 3; ++ax) phase += double(k[ax]) * x[ax] / d[ax];
      acc += coeffs[a] * std::polar(1.0, two_pi * phase);
    }
    out[b] = acc;
  }
  return out;
}

std::vector<cplx> convolve(const Grid& g, const std::vector<cplx>& f, const std::vector<cplx>& h) {
  const auto& d = g.dims();
  std::vector<cplx> out(g.size(), 0.0);
  auto representable = [&](const std::array<int, 3>& k) {
    for (int ax = 0; ax < 3; ++ax)
      if (2 * k[ax] < -d[ax] || 2 * k[ax] >= d[ax]) return false;
    return true;
  };
  for (std::size_t a = 0; a < g.size(); ++a) {
    if (f[a] == cplx(0.0)) continue;
    const auto ka = kvec(g, a);
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (h[b] == cplx(0.0)) continue;
      const auto kb = kvec(g, b);
      const std::array<int, 3> k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
      if (!representable(k)) continue;
      out[g.flat(g.index_of(0, k[0]), g.index_of(1, k[1]), g.index_of(2, k[2]))] += f[a] * h[b];
    }
  }
  return out;
}

void truncate_band(const Grid& g, std::vector<cplx>& c) {
  const auto& d = g.dims();
  for (std::size_t a = 0; a < c.size(); ++a) {
    const auto k = kvec(g, a);
    for (int ax = 0; ax < 3; ++ax)
      if (d[ax] > 1 && 3 * std::abs(k[ax]) >= d[ax]) c[a] = 0.0;
  }
}

std::vector<double> fd_derivative(const Grid& g, const std::vector<double>& values, int axis) {
  static constexpr double w[4] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const auto& d = g.dims();
  const double h = 1.0 / d[axis];
  std::vector<double> out(values.size());
  for (std::size_t b = 0; b < values.size(); ++b) {
    const auto x = point(g, b);
    double acc = 0.0;
    for (int s = 1; s <= 4; ++s) {
      auto xp = x, xm = x;
      xp[axis] = (x[axis] + s) % d[axis];
      xm[axis] = ((x[axis] - s) % d[axis] + d[axis]) % d[axis];
      acc += w[s - 1] * (values[g.flat(xp[0], xp[1], xp[2])] - values[g.flat(xm[0], xm[1], xm[2])]);
    }
    out[b] = acc / h;
  }
  return out;
}

std::vector<double> dft_derivative(const Grid& g, const std::vector<double>& values, int axis) {
  auto c = dft(g, values);
  const int n = g.dims()[axis];
  for (std::size_t b = 0; b < c.size(); ++b) {
    const auto k = g.wavevector(b);
    c[b] *= 2 * k[axis] == -n ? cplx(0.0) : cplx(0.0, 2.0 * std::numbers::pi * k[axis]);
  }
  auto v = idft(g, c);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

std::vector<double> dft_solve(const Grid& g, const std::vector<double>& f, double a, double b,
                              const std::function<bool(int, int, int)>& keep) {
  auto c = dft(g, f);
  const double tp2 = 4.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto k = g.wavevector(i);
    const double sym = tp2 * (a * (k[0] * k[0] + k[1] * k[1]) + b * k[2] * k[2]);
    c[i] = (sym == 0.0 || !keep(k[0], k[1], k[2])) ? cplx(0.0) : c[i] / sym;
  }
  auto v = idft(g, c);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].real();
  return out;
}

std::vector<double> sample(const Grid& g, const std::function<double(double, double, double)>& f) {
  const auto& d = g.dims();
  std::vector<double> v(g.size());
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int l = 0; l < d[2]; ++l) v[g.flat(i, j, l)] = f(double(i) / d[0], double(j) / d[1], double(l) / d[2]);
  return v;
}

std::vector<cplx> rk4(const OdeRhs& f, std::vector<cplx> y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  auto axpy = [](const std::vector<cplx>& a, double s, const std::vector<cplx>& b) {
    std::vector<cplx> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int n = 0; n < steps; ++n) {
    const double t = t0 + n * h;
    const auto k1 = f(t, y);
    const auto k2 = f(t + h / 2, axpy(y, h / 2, k1));
    const auto k3 = f(t + h / 2, axpy(y, h / 2, k2));
    const auto k4 = f(t + h, axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return y;
}

// ------------------------------------------------------------------ Euler2d

Euler2d::Euler2d(int n1, int n2) : n1_(n1), n2_(n2) {
  for (int j = 0; j < n1; ++j) w1_.push_back(std::polar(1.0, two_pi * j / n1));
  for (int j = 0; j < n2; ++j) w2_.push_back(std::polar(1.0, two_pi * j / n2));
}

std::vector<cplx> Euler2d::to_grid(const std::vector<cplx>& f) const {
  std::vector<cplx> out(f.size(), 0.0);
  for (int x1 = 0; x1 < n1_; ++x1)
    for (int x2 = 0; x2 < n2_; ++x2) {
      cplx acc = 0.0;
      for (int a = 0; a < n1_; ++a)
        for (int b = 0; b < n2_; ++b) acc += f[a * n2_ + b] * w1_[(a * x1) % n1_] * w2_[(b * x2) % n2_];
      out[x1 * n2_ + x2] = acc;
    }
  return out;
}

std::vector<cplx> Euler2d::from_grid(const std::vector<cplx>& v) const {
  std::vector<cplx> out(v.size(), 0.0);
  for (int a = 0; a < n1_; ++a)
    for (int b = 0; b < n2_; ++b) {
      const int k1 = 2 * a < n1_ ? a : a - n1_, k2 = 2 * b < n2_ ? b : b - n2_;
      if (3 * std::abs(k1) >= n1_ || 3 * std::abs(k2) >= n2_) continue;
      cplx acc = 0.0;
      for (int x1 = 0; x1 < n1_; ++x1)
        for (int x2 = 0; x2 < n2_; ++x2) acc += v[x1 * n2_ + x2] * std::conj(w1_[(a * x1) % n1_] * w2_[(b * x2) % n2_]);
      out[a * n2_ + b] = acc / double(n1_ * n2_);
    }
  // real fields: restore exact conjugate symmetry
  std::vector<cplx> sym(out.size());
  for (int a = 0; a < n1_; ++a)
    for (int b = 0; b < n2_; ++b) sym[a * n2_ + b] = 0.5 * (out[a * n2_ + b] + std::conj(out[((n1_ - a) % n1_) * n2_ + (n2_ - b) % n2_]));
  return sym;
}

std::vector<cplx> Euler2d::derivative(const std::vector<cplx>& f, int axis) const {
  std::vector<cplx> out(f.size());
  for (int a = 0; a < n1_; ++a)
    for (int b = 0; b < n2_; ++b) {
      const int k1 = 2 * a < n1_ ? a : a - n1_, k2 = 2 * b < n2_ ? b : b - n2_;
      const int k = axis == 0 ? k1 : k2;
      const int n = axis == 0 ? n1_ : n2_;
      out[a * n2_ + b] = 2 * k == -n ? cplx(0.0) : cplx(0.0, two_pi * k) * f[a * n2_ + b];
    }
  return out;
}

Euler2d::State Euler2d::rhs(const State& s) const {
  std::vector<cplx> psi(s.omega.size(), 0.0);
  for (int a = 0; a < n1_; ++a)
    for (int b = 0; b < n2_; ++b) {
      const int k1 = 2 * a < n1_ ? a : a - n1_, k2 = 2 * b < n2_ ? b : b - n2_;
      if (k1 == 0 && k2 == 0) continue;
      psi[a * n2_ + b] = s.omega[a * n2_ + b] / (two_pi * two_pi * double(k1 * k1 + k2 * k2));
    }
  std::vector<cplx> u1 = derivative(psi, 1), u2 = derivative(psi, 0);
  for (auto& c : u1) c = -c;
  const auto gu1 = to_grid(u1), gu2 = to_grid(u2);
  auto advect = [&](const std::vector<cplx>& q) {
    const auto q1 = to_grid(derivative(q, 0)), q2 = to_grid(derivative(q, 1));
    std::vector<cplx> prod(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) prod[i] = -(gu1[i].real() * q1[i].real() + gu2[i].real() * q2[i].real());
    return from_grid(prod);
  };
  return {advect(s.omega), advect(s.c)};
}

Euler2d::State Euler2d::step(const State& s, double dt) const {
  auto add = [](const State& a, double h, const State& b) {
    State r = a;
    for (std::size_t i = 0; i < r.omega.size(); ++i) {
      r.omega[i] += h * b.omega[i];
      r.c[i] += h * b.c[i];
    }
    return r;
  };
  const State k1 = rhs(s);
  const State k2 = rhs(add(s, dt / 2, k1));
  const State k3 = rhs(add(s, dt / 2, k2));
  const State k4 = rhs(add(s, dt, k3));
  State r = s;
  for (std::size_t i = 0; i < r.omega.size(); ++i) {
    r.omega[i] += dt / 6 * (k1.omega[i] + 2.0 * k2.omega[i] + 2.0 * k3.omega[i] + k4.omega[i]);
    r.c[i] += dt / 6 * (k1.c[i] + 2.0 * k2.c[i] + 2.0 * k3.c[i] + k4.c[i]);
  }
  return r;
}

}  // namespace oracle
