#include "driftfluid/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftfluid/quadrature.hpp"

namespace driftfluid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_nonempty(const FieldSeries& s, const char* what) {
  if (s.samples.empty()) throw ConfigurationError(std::string(what) + ": empty series");
  if (s.samples.size() > 1 && !(s.dt > 0.0))
    throw ConfigurationError(std::string(what) + ": sample spacing must be positive");
}

std::vector<cplx> mode_samples(const FieldSeries& s, std::size_t i) {
  std::vector<cplx> out(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) out[j] = s.samples[j][i];
  return out;
}

FieldSeries blank_like(const FieldSeries& s, std::size_t count, bool real) {
  FieldSeries out{s.t0, s.dt, {}};
  out.samples.assign(count, SpectralField(s.samples.front().grid(), real));
  return out;
}

void symmetrize(FieldSeries& s) {
  for (auto& f : s.samples) {
    if (!f.is_real()) continue;
    const Grid& g = f.grid();
    std::vector<cplx> c(f.coeffs().begin(), f.coeffs().end());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (f[i] + std::conj(f[g.mirror(i)]));
    f = SpectralField(g, std::move(c), true);
  }
}

enum class DuhamelKind { G, sqrt_eps_E };

FieldSeries duhamel(const FieldSeries& source, double epsilon, const WaveInitialData& init,
                    DuhamelKind kind) {
  require_nonempty(source, "duhamel");
  if (!(epsilon > 0.0)) throw ConfigurationError("duhamel: epsilon must be positive");
  const Grid& g = source.samples.front().grid();
  if (!g.is_parallel_only()) throw ConfigurationError("duhamel: source must be parallel-only");
  double scale = 0.0;
  for (const auto& f : source.samples) scale = std::max(scale, f.max_abs());
  for (const auto& f : source.samples)
    if (std::abs(f.mean()) > 1e-10 * std::max(1.0, scale))
      throw InvariantViolation("wave source has nonzero mean " + std::to_string(std::abs(f.mean())));

  const double se = std::sqrt(epsilon);
  const double omega = 1.0 / se;
  const int n = g.n(Axis::parallel);
  FieldSeries out = blank_like(source, source.size(), source.samples.front().is_real());

  for (int i = 0; i < n; ++i) {
    const int k = g.wavevector(static_cast<std::size_t>(i))[2];
    if (k == 0 || 2 * std::abs(k) == n) continue;
    const auto idx = static_cast<std::size_t>(i);
    std::vector<cplx> h = mode_samples(source, idx);
    const cplx symbol(0.0, kTwoPi * k);
    for (auto& x : h) x /= symbol;
    const CumulativeIntegral plus(h, 0.0, source.dt, omega);
    const CumulativeIntegral minus(h, 0.0, source.dt, -omega);
    const CumulativeIntegral flat(h, 0.0, source.dt, 0.0);
    const cplx e0 = init.e_par[idx];
    const cplx de0 = init.eps_dt_e_par[idx];
    for (std::size_t j = 0; j < source.size(); ++j) {
      const double t = source.dt * static_cast<double>(j);
      const double c = std::cos(omega * t), s = std::sin(omega * t);
      const cplx ip = plus.at_sample(j), im = minus.at_sample(j);
      const cplx C = 0.5 * (ip + im);
      const cplx S = (ip - im) / cplx(0.0, 2.0);
      cplx value;
      if (kind == DuhamelKind::sqrt_eps_E)
        value = se * e0 * c + de0 * s + (s * C - c * S);
      else
        value = se * e0 * s - de0 * (c - 1.0) + flat.at_sample(j) - (c * C + s * S);
      out.samples[j][idx] = value;
    }
  }
  symmetrize(out);
  return out;
}

}  // namespace

SpectralField FieldSeries::at(double t) const {
  if (samples.empty()) throw ConfigurationError("FieldSeries::at on empty series");
  const std::size_t m = samples.size();
  if (m == 1) return samples[0];
  const double u = std::clamp((t - t0) / dt, 0.0, double(m - 1));
  const double r = std::round(u);
  if (std::abs(u - r) < 1e-12) return samples[static_cast<std::size_t>(r)];
  const auto j = static_cast<std::size_t>(std::floor(u));
  const std::size_t npts = std::min<std::size_t>(4, m);
  std::size_t s = j == 0 ? 0 : j - 1;
  if (s + npts > m) s = m - npts;
  SpectralField acc(samples[0].grid(), samples[0].is_real());
  for (std::size_t a = 0; a < npts; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < npts; ++b)
      if (b != a) w *= (u - double(s + b)) / (double(a) - double(b));
    acc.axpy(w, samples[s + a]);
  }
  return acc;
}

SpectralField parallel_current(const EpsState& s) { return perp_average(product(s.rho, s.v)); }

SpectralField wave_source(const EpsState& s) {
  const double eps = s.epsilon;
  const EpsFields f = solve_eps_fields(s.rho, eps);
  SpectralField rv2 = perp_average(product(s.rho, product(s.v, s.v)));
  SpectralField g = derivative(derivative(rv2, Axis::parallel), Axis::parallel);
  SpectralField eede = product(f.e_par, derivative(f.e_par, Axis::parallel));
  g.axpy(-eps, derivative(eede, Axis::parallel));
  SpectralField rphi = perp_average(product(s.rho, f.eps_dpar_phi));
  g += derivative(rphi, Axis::parallel);
  g[0] = 0.0;
  return g;
}

WaveInitialData wave_initial_data(const EpsState& s0) {
  SpectralField J = parallel_current(s0);
  J[0] = 0.0;
  return {solve_eps_fields(s0.rho, s0.epsilon).e_par, -J};
}

FieldSeries duhamel_G(const FieldSeries& source, double epsilon, const WaveInitialData& init) {
  return duhamel(source, epsilon, init, DuhamelKind::G);
}

FieldSeries duhamel_E(const FieldSeries& source, double epsilon, const WaveInitialData& init) {
  return duhamel(source, epsilon, init, DuhamelKind::sqrt_eps_E);
}

Decomposition decompose(const FieldSeries& e_par, double epsilon, const SpectralField& W0) {
  require_nonempty(e_par, "decompose");
  const double period = kTwoPi * std::sqrt(epsilon);
  const double span = e_par.t_end() - e_par.t0;
  const double slack = 1e-9 * std::max(1.0, span);
  if (span + slack < period)
    throw DomainError("decompose: series of length " + std::to_string(span) +
                      " is shorter than one period " + std::to_string(period) +
                      "; no admissible t (last admissible would be T - 2*pi*sqrt(eps) = " +
                      std::to_string(e_par.t_end() - period) + ")");
  std::size_t count = 0;
  while (count < e_par.size() && e_par.time(count) - e_par.t0 + period <= span + slack) ++count;

  const Grid& g = e_par.samples.front().grid();
  const bool real = e_par.samples.front().is_real();
  Decomposition d{blank_like(e_par, count, real), blank_like(e_par, count, real),
                  blank_like(e_par, count, real)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const CumulativeIntegral H(mode_samples(e_par, i), 0.0, e_par.dt);
    std::vector<cplx> e2(count);
    for (std::size_t j = 0; j < count; ++j) {
      const double t = e_par.dt * static_cast<double>(j);
      const double t_hi = std::min(t + period, H.t_end());
      e2[j] = (H.at(t_hi) - H.at_sample(j)) / period;
      d.e2.samples[j][i] = e2[j];
      d.e1.samples[j][i] = e_par.samples[j][i] - e2[j];
    }
    const CumulativeIntegral H2(e2, 0.0, e_par.dt);
    for (std::size_t j = 0; j < count; ++j)
      d.W.samples[j][i] = W0[i] + H.at_sample(j) - H2.at_sample(j);
  }
  return d;
}

Correctors extract_correctors(const FieldSeries& x, double epsilon, int periods) {
  require_nonempty(x, "extract_correctors");
  if (periods < 2) throw ConfigurationError("demodulation window must span at least 2 periods");
  const double omega = 1.0 / std::sqrt(epsilon);
  const double L = periods * kTwoPi * std::sqrt(epsilon);
  const double span = x.t_end() - x.t0;
  if (L > span * (1.0 + 1e-9))
    throw ConfigurationError("demodulation window " + std::to_string(L) +
                             " longer than the series " + std::to_string(span));
  const double slack = 1e-9 * std::max(1.0, span);
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double t = x.time(j) - x.t0;
    if (t - 0.5 * L >= -slack && t + 0.5 * L <= span + slack) keep.push_back(j);
  }
  const Grid& g = x.samples.front().grid();
  Correctors c;
  for (FieldSeries* s : {&c.plus, &c.minus}) {
    s->t0 = x.time(keep.front());
    s->dt = x.dt;
    s->samples.assign(keep.size(), SpectralField(g, false));
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto h = mode_samples(x, i);
    // Absolute times so that the phases refer to t, not t - t0.
    const CumulativeIntegral down(h, x.t0, x.dt, -omega);
    const CumulativeIntegral up(h, x.t0, x.dt, omega);
    for (std::size_t q = 0; q < keep.size(); ++q) {
      const double t = x.time(keep[q]);
      const double lo = std::max(x.t0, t - 0.5 * L), hi = std::min(x.t_end(), t + 0.5 * L);
      c.plus.samples[q][i] = (down.at(hi) - down.at(lo)) / L;
      c.minus.samples[q][i] = (up.at(hi) - up.at(lo)) / L;
    }
  }
  return c;
}

Correctors corrector_initial(const EpsState& s0) {
  const WaveInitialData w = wave_initial_data(s0);
  const double se = std::sqrt(s0.epsilon);
  const Grid& g = w.e_par.grid();
  SpectralField plus(g, false), minus(g, false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cplx a = se * w.e_par[i];
    const cplx b = -w.eps_dt_e_par[i];  // J - mean J
    plus[i] = 0.5 * (a + cplx(0.0, 1.0) * b);
    minus[i] = 0.5 * (a - cplx(0.0, 1.0) * b);
  }
  return {FieldSeries{0.0, 0.0, {plus}}, FieldSeries{0.0, 0.0, {minus}}};
}

FieldSeries advect_correctors(const SpectralField& e0, const FieldSeries& ubar, double dt) {
  require_nonempty(ubar, "advect_correctors");
  if (!e0.grid().same_shape(ubar.samples.front().grid()))
    throw ConfigurationError("advect_correctors: corrector and velocity grids differ");
  FieldSeries out{ubar.t0, ubar.dt, {e0}};
  if (ubar.size() == 1) return out;
  if (!(dt > 0.0)) throw ConfigurationError("advect_correctors: dt must be positive");
  const double ratio = ubar.dt / dt;
  const auto sub = static_cast<long>(std::llround(ratio));
  if (sub < 1 || std::abs(ratio - double(sub)) > 1e-9 * ratio)
    throw ConfigurationError("advect_correctors: dt " + std::to_string(dt) +
                             " does not divide the velocity sample spacing " + std::to_string(ubar.dt));
  const double h = ubar.dt / double(sub);
  auto tendency = [&](const SpectralField& e, const SpectralField& u) {
    return -product(u, derivative(e, Axis::parallel));
  };
  SpectralField e = e0;
  for (std::size_t j = 0; j + 1 < ubar.size(); ++j) {
    for (long m = 0; m < sub; ++m) {
      const double t = ubar.time(j) + h * double(m);
      const SpectralField u0 = ubar.at(t), uh = ubar.at(t + 0.5 * h), u1 = ubar.at(t + h);
      const SpectralField k1 = tendency(e, u0);
      const SpectralField k2 = tendency(SpectralField(e).axpy(0.5 * h, k1), uh);
      const SpectralField k3 = tendency(SpectralField(e).axpy(0.5 * h, k2), uh);
      const SpectralField k4 = tendency(SpectralField(e).axpy(h, k3), u1);
      e.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
    }
    out.samples.push_back(e);
  }
  return out;
}

double corrector_residual(const SpectralField& x, const SpectralField& plus,
                          const SpectralField& minus, double t, double epsilon) {
  const double th = t / std::sqrt(epsilon);
  const cplx ep = std::polar(1.0, th), em = std::polar(1.0, -th);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::norm(x[i] - ep * plus[i] - em * minus[i]);
  return std::sqrt(acc);
}

SpectralField corrector_velocity(const SpectralField& plus, const SpectralField& minus, double t,
                                 double epsilon) {
  const double th = t / std::sqrt(epsilon);
  const cplx ep = std::polar(1.0, th), em = std::polar(1.0, -th);
  const Grid& g = plus.grid();
  std::vector<cplx> c(g.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(0.0, -1.0) * (ep * plus[i] - em * minus[i]);
  // E₋ = conj(E₊) mirrored makes this real; symmetrize the roundoff away.
  std::vector<cplx> r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = 0.5 * (c[i] + std::conj(c[g.mirror(i)]));
  return SpectralField(g, std::move(r), true);
}

EpsRecording record_eps_run(const EpsSolver& solver, const EpsState& s0, double t_end,
                            std::optional<double> dt) {
  EpsRecording r{{}, {}, {}, {}, {}, s0, s0};
  double last_t = s0.t;
  bool first = true;
  auto observe = [&](const EpsState& s) {
    if (!first && r.e_par.samples.size() == 1) {
      for (FieldSeries* f : {&r.e_par, &r.source, &r.current, &r.G}) f->dt = s.t - last_t;
    }
    first = false;
    last_t = s.t;
    r.e_par.samples.push_back(solve_eps_fields(s.rho, s.epsilon).e_par);
    r.source.samples.push_back(wave_source(s));
    r.current.samples.push_back(parallel_current(s));
    r.G.samples.push_back(s.G);
    r.energy.push_back(solver.energy(s));
  };
  for (FieldSeries* f : {&r.e_par, &r.source, &r.current, &r.G}) f->t0 = s0.t;
  r.final = solver.integrate(s0, t_end, dt, observe);
  return r;
}

SpectrumPeak dominant_angular_frequency(std::span<const double> signal, double dt) {
  const std::size_t n = signal.size();
  if (n < 4) throw ConfigurationError("spectrum needs at least 4 samples");
  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= double(n);
  double best = -1.0;
  std::size_t arg = 1;
  for (std::size_t m = 1; m <= n / 2; ++m) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += (signal[j] - mean) * std::polar(1.0, -kTwoPi * double(m) * double(j) / double(n));
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      arg = m;
    }
  }
  const double bin = kTwoPi / (double(n) * dt);
  return {bin * double(arg), bin};
}

}  // namespace driftfluid
