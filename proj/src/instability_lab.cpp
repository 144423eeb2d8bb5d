#include "driftfluid/instability_lab.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftfluid/errors.hpp"

namespace driftfluid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_field(const SpectralField& f) {
  for (cplx c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e150) return false;
  return true;
}

void keep_harmonics(SpectralField& f, int k, int harmonics) {
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int q = g.wavevector(i)[2];
    if (q % k != 0 || std::abs(q / k) > harmonics) f[i] = 0.0;
  }
}

}  // namespace

SpectralField TwoPhaseState::rho2() const {
  SpectralField r = -rho1;
  r[0] += 1.0;
  return r;
}

TwoPhaseTendency two_phase_rhs(const TwoPhaseState& s, double margin) {
  const Grid& g = s.rho1.grid();
  if (!g.is_parallel_only()) throw ConfigurationError("two-phase fields must be parallel-only");
  const SpectralField rho2 = s.rho2();
  const auto r1 = dealiased_values(s.rho1);
  const auto r2 = dealiased_values(rho2);
  const auto v1 = dealiased_values(s.v1);
  const auto v2 = dealiased_values(s.v2);
  const auto d1 = dealiased_values(derivative(s.v1, Axis::parallel));
  const auto d2 = dealiased_values(derivative(s.v2, Axis::parallel));

  TwoPhaseTendency out{-derivative(product_from_values(g, v1, r1, true), Axis::parallel),
                       -product_from_values(g, v1, d1, true), -product_from_values(g, v2, d2, true),
                       false};
  const SpectralField rho2_t = -derivative(product_from_values(g, v2, r2, true), Axis::parallel);

  const auto r1t = dealiased_values(out.rho1);
  const auto r2t = dealiased_values(rho2_t);
  const auto v1t = dealiased_values(out.v1);
  const auto v2t = dealiased_values(out.v2);
  SpectralField D = product_from_values(g, r1t, v1, true);
  D += product_from_values(g, r1, v1t, true);
  D += product_from_values(g, r2t, v2, true);
  D += product_from_values(g, r2, v2t, true);
  D[0] = 0.0;
  out.v1 -= D;
  out.v2 -= D;
  out.rho1[0] = 0.0;

  double lo = 1.0, hi = 0.0;
  for (cplx x : r1) {
    lo = std::min(lo, x.real());
    hi = std::max(hi, x.real());
  }
  out.interior_breach = lo <= margin || hi >= 1.0 - margin;
  return out;
}

TwoPhaseState two_phase_step(const TwoPhaseState& s, double dt, double margin) {
  auto stage = [&](const TwoPhaseTendency& k, double h) {
    TwoPhaseState y = s;
    y.rho1.axpy(h, k.rho1);
    y.v1.axpy(h, k.v1);
    y.v2.axpy(h, k.v2);
    return y;
  };
  const auto k1 = two_phase_rhs(s, margin);
  const auto k2 = two_phase_rhs(stage(k1, 0.5 * dt), margin);
  const auto k3 = two_phase_rhs(stage(k2, 0.5 * dt), margin);
  const auto k4 = two_phase_rhs(stage(k3, dt), margin);
  TwoPhaseState out = s;
  const double w = dt / 6.0;
  out.rho1.axpy(w, k1.rho1).axpy(2 * w, k2.rho1).axpy(2 * w, k3.rho1).axpy(w, k4.rho1);
  out.v1.axpy(w, k1.v1).axpy(2 * w, k2.v1).axpy(2 * w, k3.v1).axpy(w, k4.v1);
  out.v2.axpy(w, k1.v2).axpy(2 * w, k2.v2).axpy(2 * w, k3.v2).axpy(w, k4.v2);
  out.t = s.t + dt;
  if (!finite_field(out.rho1) || !finite_field(out.v1) || !finite_field(out.v2))
    throw BlowUpError("two-phase run: non-finite state at t = " + std::to_string(out.t), s.t);
  return out;
}

LimitState embed_two_phase(const TwoPhaseState& s, int n1) {
  const int npar = s.rho1.grid().n(Axis::parallel);
  const Grid g = Grid(n1, 1, npar).with_collocation_axis(Axis::perp1);
  const auto r1 = inverse(s.rho1), r2 = inverse(s.rho2());
  const auto v1 = inverse(s.v1), v2 = inverse(s.v2);
  std::vector<double> rho(g.size()), v(g.size());
  for (int i = 0; i < n1; ++i) {
    const bool first = i < n1 / 2;
    for (int j = 0; j < npar; ++j) {
      const auto idx = g.flat(i, 0, j);
      const auto p = static_cast<std::size_t>(j);
      rho[idx] = first ? 2.0 * r1[p] : 2.0 * r2[p];
      v[idx] = first ? v1[p] : v2[p];
    }
  }
  SpectralField fr = forward(g, rho);
  fr[0] = 1.0;
  return LimitState{s.t, fr, forward(g, v), false};
}

TwoPhaseState extract_two_phase(const LimitState& s) {
  const Grid& g = s.rho.grid();
  const int n1 = g.n(Axis::perp1), npar = g.n(Axis::parallel);
  const auto rho = inverse(s.rho), v = inverse(s.v);
  std::vector<double> r1(npar), v1(npar), v2(npar);
  for (int j = 0; j < npar; ++j) {
    const auto p = static_cast<std::size_t>(j);
    r1[p] = 0.5 * rho[g.flat(0, 0, j)];
    v1[p] = v[g.flat(0, 0, j)];
    v2[p] = v[g.flat(n1 / 2, 0, j)];
  }
  const Grid gp = Grid::parallel_only(npar);
  return TwoPhaseState{s.t, forward(gp, r1), forward(gp, v1), forward(gp, v2)};
}

LimitState mollified_two_phase(const TwoPhaseState& s, int n1, double width) {
  const int npar = s.rho1.grid().n(Axis::parallel);
  const Grid g(n1, 4, npar);
  const auto r1 = inverse(s.rho1), r2 = inverse(s.rho2());
  const auto v1 = inverse(s.v1), v2 = inverse(s.v2);
  std::vector<double> rho(g.size()), v(g.size());
  for (int i = 0; i < n1; ++i) {
    const double x = double(i) / n1;
    const double w = 0.5 + 0.5 * std::tanh(std::sin(kTwoPi * x) / width);
    for (int i2 = 0; i2 < 4; ++i2)
      for (int j = 0; j < npar; ++j) {
        const auto idx = g.flat(i, i2, j);
        const auto p = static_cast<std::size_t>(j);
        rho[idx] = 2.0 * (w * r1[p] + (1.0 - w) * r2[p]);
        v[idx] = w * v1[p] + (1.0 - w) * v2[p];
      }
  }
  return project_initial(forward(g, rho), forward(g, v));
}

std::array<std::array<double, 4>, 4> linear_symbol(const Background& bg) {
  const double r1 = bg.rho1, r2 = 1.0 - bg.rho1, u1 = bg.v1, u2 = bg.v2;
  // Closure: ∂∥p' = -∂∥(u1² r1' + u2² r2' + 2 r1 u1 a + 2 r2 u2 b).
  return {{{u1, 0.0, r1, 0.0},
           {0.0, u2, 0.0, r2},
           {-u1 * u1, -u2 * u2, u1 - 2.0 * r1 * u1, -2.0 * r2 * u2},
           {-u1 * u1, -u2 * u2, -2.0 * r1 * u1, u2 - 2.0 * r2 * u2}}};
}

std::array<cplx, 4> linear_growth(const Background& bg, int k) {
  if (!(bg.rho1 > 0.0 && bg.rho1 < 1.0)) throw DomainError("background density must lie in (0, 1)");
  const auto A = linear_symbol(bg);
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);
  std::array<cplx, 4> out;
  for (int i = 0; i < 4; ++i)
    out[static_cast<std::size_t>(i)] = cplx(0.0, -kTwoPi * k) * cplx(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  return out;
}

ExpFit fit_exponential(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = std::min(t.size(), y.size());
  if (n < 2) return {0.0, 0.0, static_cast<int>(n)};
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ly = std::log(y[i]);
    st += t[i];
    sy += ly;
    stt += t[i] * t[i];
    sty += t[i] * ly;
    syy += ly * ly;
  }
  const double N = double(n);
  const double cov = sty - st * sy / N, vt = stt - st * st / N, vy = syy - sy * sy / N;
  const double rate = vt > 0 ? cov / vt : 0.0;
  const double r2 = (vt > 0 && vy > 0) ? cov * cov / (vt * vy) : 1.0;
  return {rate, r2, static_cast<int>(n)};
}

std::vector<GrowthRow> growth_experiment(const GrowthConfig& c, int k_max) {
  if (k_max < 1) throw ConfigurationError("k_max must be at least 1");
  if (3 * k_max >= c.npar)
    throw ConfigurationError("k_max beyond the dealiased band");
  const Grid g = Grid::parallel_only(c.npar);
  std::vector<GrowthRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    const auto lin = linear_growth(c.background, k);
    GrowthRow row{k, lin[0].real(), lin[0].imag(), 0.0, 0.0, 0, false, false};
    TwoPhaseState s{0.0, constant(g, c.background.rho1), constant(g, c.background.v1),
                    constant(g, c.background.v2)};
    const double drift = c.background.v1 - c.background.v2;
    s.rho1.at(0, 0, k) += 0.5 * c.seed;
    s.rho1.at(0, 0, -k) += 0.5 * c.seed;
    s.v1.at(0, 0, k) -= 0.5 * c.seed * drift;
    s.v1.at(0, 0, -k) -= 0.5 * c.seed * drift;
    s.v2.at(0, 0, k) -= 0.5 * c.seed * drift;
    s.v2.at(0, 0, -k) -= 0.5 * c.seed * drift;

    std::vector<double> ts, amps, all_t, all_a;
    const auto steps = static_cast<long>(std::ceil(c.t_end / c.dt - 1e-9));
    const double h = c.t_end / double(steps);
    for (long n = 0; n <= steps; ++n) {
      const double amp = 2.0 * std::abs(s.rho1.at(0, 0, k));
      all_t.push_back(s.t);
      all_a.push_back(amp);
      if (amp >= c.window_low * c.seed && amp <= c.window_high) {
        ts.push_back(s.t);
        amps.push_back(amp);
      }
      if (amp > c.window_high) {
        row.window_reached = true;
        break;
      }
      if (n == steps) break;
      try {
        s = two_phase_step(s, h);
      } catch (const BlowUpError&) {
        row.blew_up = true;
        break;
      }
      for (SpectralField* f : {&s.rho1, &s.v1, &s.v2}) keep_harmonics(*f, k, c.harmonics);
      s.t = h * double(n + 1);
    }
    const ExpFit fit = ts.size() >= 2 ? fit_exponential(ts, amps) : fit_exponential(all_t, all_a);
    row.sigma_meas = fit.rate;
    row.r_squared = fit.r_squared;
    row.fit_points = fit.points;
    rows.push_back(row);
  }
  return rows;
}

TwoPhaseState seeded_state(const Background& bg, int npar, const BandSpec& profile, double l2,
                           std::uint64_t seed) {
  const Grid g = Grid::parallel_only(npar);
  std::mt19937_64 rng(seed);
  BandSpec spec = profile;
  spec.zero_mean = true;
  spec.amplitude = 1.0;
  SpectralField r = random_band_field(g, spec, rng);
  const double drift = bg.v1 - bg.v2;
  // Perturbation vector (r₁, a, b) with a = b = -drift r₁ has squared norm (1 + 2 drift²)|r₁|².
  r *= l2 / (l2_norm(r) * std::sqrt(1.0 + 2.0 * drift * drift));
  TwoPhaseState s{0.0, constant(g, bg.rho1), constant(g, bg.v1), constant(g, bg.v2)};
  s.rho1 += r;
  s.v1.axpy(-drift, r);
  s.v2.axpy(-drift, r);
  return s;
}

DoublingResult time_to_doubling(const TwoPhaseState& s0, const Background& bg, double t_end,
                                double dt) {
  const Grid& g = s0.rho1.grid();
  auto size = [&](const TwoPhaseState& s) {
    const SpectralField a = s.rho1 - constant(g, bg.rho1);
    const SpectralField b = s.v1 - constant(g, bg.v1);
    const SpectralField c = s.v2 - constant(g, bg.v2);
    return std::sqrt(std::pow(l2_norm(a), 2) + std::pow(l2_norm(b), 2) + std::pow(l2_norm(c), 2));
  };
  const double target = 2.0 * size(s0);
  TwoPhaseState s = s0;
  double prev = size(s);
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / double(steps);
  for (long n = 1; n <= steps; ++n) {
    try {
      s = two_phase_step(s, h);
    } catch (const BlowUpError& e) {
      return {e.time(), true};
    }
    const double cur = size(s);
    if (cur >= target) {
      // Log-linear interpolation of the crossing inside the step.
      const double frac = std::log(target / prev) / std::log(cur / prev);
      return {h * (double(n - 1) + std::clamp(frac, 0.0, 1.0)), true};
    }
    prev = cur;
  }
  return {t_end, false};
}

}  // namespace driftfluid
