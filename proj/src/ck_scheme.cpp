#include "driftfluid/ck_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "driftfluid/oscillation.hpp"
#include "driftfluid/quadrature.hpp"

namespace driftfluid {

namespace {

std::vector<SpectralField> cumulative(const SpectralField& start, const std::vector<SpectralField>& rate,
                                      double dt) {
  const Grid& g = start.grid();
  std::vector<SpectralField> out(rate.size(), start);
  std::vector<cplx> y(rate.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < rate.size(); ++j) {
      y[j] = rate[j][i];
      any = any || y[j] != cplx(0.0);
    }
    if (!any) continue;
    const CumulativeIntegral I(y, 0.0, dt);
    for (std::size_t j = 0; j < rate.size(); ++j) out[j][i] += I.at_sample(j);
  }
  for (auto& f : out) {
    // Keep exact Hermitian symmetry after the per-mode quadrature.
    std::vector<cplx> c(f.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (f[i] + std::conj(f[g.mirror(i)]));
    f = SpectralField(g, std::move(c), true);
  }
  return out;
}

double trajectory_norm(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b,
                       double dt, const NormParams& p) {
  std::vector<TimedField> traj;
  traj.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) traj.push_back({dt * double(j), a[j] - b[j]});
  return shrinking_norm(traj, p);
}

}  // namespace

ContractionRow iterate_difference(const CkIterate& prev, const CkIterate& next, const NormParams& p) {
  if (prev.size() != next.size()) throw ConfigurationError("iterates on different time grids");
  ContractionRow r{next.n,
                   trajectory_norm(next.rho, prev.rho, next.dt, p),
                   trajectory_norm(next.w, prev.w, next.dt, p),
                   trajectory_norm(next.G, prev.G, next.dt, p),
                   trajectory_norm(next.sqrt_eps_e, prev.sqrt_eps_e, next.dt, p),
                   0.0,
                   std::numeric_limits<double>::quiet_NaN()};
  r.total = r.rho + r.w + r.G + r.E;
  return r;
}

namespace {

void finish_report(ContractionReport& rep) {
  rep.max_ratio = 0.0;
  bool any = false;
  for (const auto& r : rep.rows) {
    if (r.n >= 2 && std::isfinite(r.ratio)) {
      rep.max_ratio = std::max(rep.max_ratio, r.ratio);
      any = true;
    }
    if (!std::isfinite(r.total)) rep.diverged = true;
  }
  if (!any) rep.max_ratio = std::numeric_limits<double>::quiet_NaN();
  rep.half_rate = any && !rep.diverged && rep.max_ratio <= 0.5;
  rep.contracting = any && !rep.diverged && rep.max_ratio < 1.0;
}

void push_row(ContractionReport& rep, ContractionRow row) {
  if (!rep.rows.empty()) {
    const double prev = rep.rows.back().total;
    row.ratio = prev > 0.0 ? row.total / prev : (row.total == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  }
  rep.rows.push_back(row);
}

}  // namespace

ContractionReport contraction_report(std::span<const CkIterate> iterates, const NormParams& params) {
  if (iterates.size() < 2) throw ConfigurationError("contraction report needs at least two iterates");
  ContractionReport rep;
  for (std::size_t i = 1; i < iterates.size(); ++i)
    push_row(rep, iterate_difference(iterates[i - 1], iterates[i], params));
  finish_report(rep);
  return rep;
}

CkScheme::CkScheme(CkConfig config, EpsState initial)
    : config_(config),
      initial_(std::move(initial)),
      solver_(EpsConfig{config.epsilon, 0.5, config.samples_per_period, 1.0, config.norm.delta0}) {
  config_.norm.validate();
  if (initial_.t != 0.0) throw ConfigurationError("CK iteration starts from t = 0");
  if (std::abs(initial_.epsilon - config_.epsilon) > 1e-15)
    throw ConfigurationError("initial state and scheme disagree on epsilon");
  if (config_.min_samples < 2) throw ConfigurationError("min_samples must be at least 2");
  horizon_ = config_.norm.eta * (config_.norm.delta0 - config_.norm.delta);
  const double dt_cap = std::min(solver_.oscillation_dt(), horizon_ / double(config_.min_samples - 1));
  const auto steps = static_cast<std::size_t>(std::ceil(horizon_ / dt_cap - 1e-9));
  count_ = steps + 1;
  dt_ = horizon_ / double(steps);
}

CkIterate CkScheme::initialize() const {
  CkIterate it{0, dt_, {}, {}, {}, {}};
  it.rho.assign(count_, initial_.rho);
  it.w.assign(count_, initial_.v);
  FieldSeries zero{0.0, dt_, std::vector<SpectralField>(count_, SpectralField(initial_.G.grid()))};
  const WaveInitialData init = wave_initial_data(initial_);
  it.G = duhamel_G(zero, config_.epsilon, init).samples;
  it.sqrt_eps_e = duhamel_E(zero, config_.epsilon, init).samples;
  return it;
}

CkIterate CkScheme::iterate(const CkIterate& prev) const {
  if (prev.size() != count_) throw ConfigurationError("iterate on a foreign time grid");
  const Grid& g = initial_.rho.grid();
  std::vector<SpectralField> drho, dw;
  FieldSeries source{0.0, dt_, {}};
  drho.reserve(count_);
  dw.reserve(count_);
  source.samples.reserve(count_);
  for (std::size_t j = 0; j < count_; ++j) {
    const EpsState s{prev.time(j), config_.epsilon, prev.rho[j], prev.w[j] + broadcast(prev.G[j], g),
                     prev.G[j], false};
    const EpsTendency k = solver_.rhs(s);
    drho.push_back(k.rho);
    dw.push_back(k.v - broadcast(k.G, g));
    source.samples.push_back(wave_source(s));
  }
  CkIterate next{prev.n + 1, dt_, {}, {}, {}, {}};
  next.rho = cumulative(initial_.rho, drho, dt_);
  for (auto& r : next.rho) r[0] = 1.0;
  next.w = cumulative(initial_.v, dw, dt_);
  const WaveInitialData init = wave_initial_data(initial_);
  next.G = duhamel_G(source, config_.epsilon, init).samples;
  next.sqrt_eps_e = duhamel_E(source, config_.epsilon, init).samples;
  return next;
}

CkIterate CkScheme::from_states(std::span<const EpsState> states) const {
  if (states.size() != count_) throw ConfigurationError("trajectory length does not match the time grid");
  CkIterate it{0, dt_, {}, {}, {}, {}};
  const double se = std::sqrt(config_.epsilon);
  for (const auto& s : states) {
    it.rho.push_back(s.rho);
    it.w.push_back(s.filtered_velocity());
    it.G.push_back(s.G);
    it.sqrt_eps_e.push_back(se * solve_eps_fields(s.rho, s.epsilon).e_par);
  }
  return it;
}

CkScheme::Result CkScheme::run(int max_iterations) const {
  const int cap = max_iterations > 0 ? max_iterations : config_.max_iterations;
  Result res{initialize(), {}};
  for (int n = 1; n <= cap; ++n) {
    CkIterate next = iterate(res.last);
    ContractionRow row = iterate_difference(res.last, next, config_.norm);
    push_row(res.report, row);
    res.last = std::move(next);
    if (!std::isfinite(row.total)) {
      res.report.diverged = true;
      break;
    }
    if (row.total < config_.tolerance) {
      res.report.converged = true;
      break;
    }
  }
  finish_report(res.report);
  return res;
}

double bisect_eta(const CkConfig& config, const EpsState& initial, double eta_max, int iterations,
                  int steps) {
  auto passes = [&](double eta) {
    CkConfig c = config;
    c.norm.eta = eta;
    const CkScheme scheme(c, initial);
    const auto res = scheme.run(iterations);
    if (res.report.diverged) return false;
    for (const auto& r : res.report.rows)
      if (r.n >= 2 && std::isfinite(r.ratio) && r.ratio > 0.5) return false;
    return true;
  };
  if (passes(eta_max)) return eta_max;
  double lo = 0.0, hi = eta_max;
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace driftfluid
