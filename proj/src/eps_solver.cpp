#include "driftfluid/eps_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "driftfluid/analytic_norm.hpp"

namespace driftfluid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_field(const SpectralField& f) {
  for (cplx c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e150) return false;
  return true;
}

double max_abs_values(std::span<const cplx> v) {
  return kernels::max(v.size(), [&](std::size_t i) { return std::abs(v[i].real()); }, 0.0);
}

}  // namespace

double min_on_grid(const SpectralField& f) {
  auto vals = inverse(f);
  return *std::min_element(vals.begin(), vals.end());
}

SpectralField EpsState::filtered_velocity() const { return v - broadcast(G, v.grid()); }

EpsFields solve_eps_fields(const SpectralField& rho, double epsilon) {
  SpectralField phi = solve_phi(rho, epsilon);
  PerpField e = perp_field(phi);
  SpectralField dphi = epsilon * derivative(phi, Axis::parallel);
  SpectralField V = solve_V(perp_average(rho), epsilon);
  SpectralField epar = parallel_field(V);
  return {std::move(phi), std::move(e), std::move(dphi), std::move(V), std::move(epar)};
}

EpsSolver::EpsSolver(EpsConfig config) : config_(config) {
  if (!(config_.epsilon > 0.0) || config_.epsilon > 1.0)
    throw ConfigurationError("epsilon must lie in (0, 1]");
  if (!(config_.cfl > 0.0)) throw ConfigurationError("cfl must be positive");
  if (!(config_.samples_per_period >= 1.0))
    throw ConfigurationError("samples_per_period must be at least 1");
}

EpsState EpsSolver::make_state_unchecked(SpectralField rho0, SpectralField v0) const {
  if (!rho0.grid().same_shape(v0.grid())) throw ConfigurationError("rho and v grids differ");
  if (!rho0.is_real() || !v0.is_real()) throw ConfigurationError("initial data must be real");
  if (std::abs(rho0.mean() - 1.0) > 1e-6)
    throw DomainError("initial density must have mean 1, got " +
                      std::to_string(rho0.mean().real()));
  SpectralField rho = dealias(std::move(rho0));
  rho[0] = 1.0;
  SpectralField G(rho.grid().parallel_reduction());
  const bool warn = min_on_grid(rho) <= 0.0;
  return EpsState{0.0, config_.epsilon, std::move(rho), dealias(std::move(v0)), std::move(G), warn};
}

EpsState EpsSolver::make_state(SpectralField rho0, SpectralField v0) const {
  EpsState s = make_state_unchecked(std::move(rho0), std::move(v0));
  SpectralField imbalance = perp_average(s.rho);
  imbalance[0] -= 1.0;
  const double size = analytic_norm(imbalance, config_.admissibility_delta);
  const double bound = config_.admissibility_constant * std::sqrt(config_.epsilon);
  if (size > bound)
    throw DomainError("parallel charge imbalance " + std::to_string(size) + " exceeds C*sqrt(eps) = " +
                      std::to_string(bound));
  return s;
}

EpsTendency EpsSolver::rhs(const EpsState& s) const {
  const Grid& g = s.rho.grid();
  const EpsFields f = solve_eps_fields(s.rho, s.epsilon);

  const auto r = dealiased_values(s.rho);
  const auto v = dealiased_values(s.v);
  const auto dv = dealiased_values(derivative(s.v, Axis::parallel));

  EpsTendency out{SpectralField(g), SpectralField(g), f.e_par, false};
  out.rho.axpy(-1.0, derivative(product_from_values(g, v, r, true), Axis::parallel));
  out.v.axpy(-1.0, product_from_values(g, v, dv, true));

  if (!perp_transport_vanishes(g)) {
    const auto e1 = dealiased_values(f.e_perp.e1);
    const auto e2 = dealiased_values(f.e_perp.e2);
    out.rho.axpy(-1.0, derivative(product_from_values(g, e1, r, true), Axis::perp1));
    out.rho.axpy(-1.0, derivative(product_from_values(g, e2, r, true), Axis::perp2));
    out.v.axpy(-1.0, derivative(product_from_values(g, e1, v, true), Axis::perp1));
    out.v.axpy(-1.0, derivative(product_from_values(g, e2, v, true), Axis::perp2));
  }
  out.v -= f.eps_dpar_phi;
  out.v += broadcast(f.e_par, g);
  out.rho[0] = 0.0;

  double rmin = std::numeric_limits<double>::infinity();
  for (cplx x : r) rmin = std::min(rmin, x.real());
  out.positivity_breach = rmin <= 0.0;
  return out;
}

EpsState EpsSolver::step(const EpsState& s, double dt) const {
  auto stage = [&](const EpsTendency& k, double h) {
    EpsState y = s;
    y.rho.axpy(h, k.rho);
    y.v.axpy(h, k.v);
    y.G.axpy(h, k.G);
    return y;
  };
  const EpsTendency k1 = rhs(s);
  const EpsTendency k2 = rhs(stage(k1, 0.5 * dt));
  const EpsTendency k3 = rhs(stage(k2, 0.5 * dt));
  const EpsTendency k4 = rhs(stage(k3, dt));

  EpsState out = s;
  const double w = dt / 6.0;
  out.rho.axpy(w, k1.rho).axpy(2 * w, k2.rho).axpy(2 * w, k3.rho).axpy(w, k4.rho);
  out.v.axpy(w, k1.v).axpy(2 * w, k2.v).axpy(2 * w, k3.v).axpy(w, k4.v);
  out.G.axpy(w, k1.G).axpy(2 * w, k2.G).axpy(2 * w, k3.G).axpy(w, k4.G);
  out.rho[0] = 1.0;
  out.t = s.t + dt;

  if (!finite_field(out.rho) || !finite_field(out.v) || !finite_field(out.G))
    throw EpsBlowUpError("non-finite state at t = " + std::to_string(out.t), s);
  out.positivity_warning = s.positivity_warning || k1.positivity_breach || min_on_grid(out.rho) <= 0.0;
  return out;
}

double EpsSolver::oscillation_dt() const {
  return kTwoPi * std::sqrt(config_.epsilon) / config_.samples_per_period;
}

double EpsSolver::dt_max(const EpsState& s) const {
  const Grid& g = s.rho.grid();
  const EpsFields f = solve_eps_fields(s.rho, s.epsilon);
  double rate = max_abs_values(inverse_complex(s.v)) * g.n(Axis::parallel);
  if (!perp_transport_vanishes(g))
    rate += max_abs_values(inverse_complex(f.e_perp.e1)) * g.n(Axis::perp1) +
            max_abs_values(inverse_complex(f.e_perp.e2)) * g.n(Axis::perp2);
  const double osc = oscillation_dt();
  return rate > 0.0 ? std::min(config_.cfl / rate, osc) : osc;
}

double EpsSolver::energy(const EpsState& s) const {
  const Grid& g = s.rho.grid();
  const EpsFields f = solve_eps_fields(s.rho, s.epsilon);
  const auto r = dealiased_values(s.rho);
  const auto v = dealiased_values(s.v);
  const double kinetic =
      0.5 * kernels::sum(r.size(), [&](std::size_t i) { return r[i].real() * v[i].real() * v[i].real(); }) /
      static_cast<double>(r.size());

  const double eps = s.epsilon;
  auto phi = f.phi.coeffs();
  const double drift = kernels::sum(phi.size(), [&](std::size_t i) {
    auto k = g.wavevector(i);
    const double kp2 = double(k[0]) * k[0] + double(k[1]) * k[1];
    const double kz2 = double(k[2]) * k[2];
    return std::norm(phi[i]) * kTwoPi * kTwoPi * (kp2 + eps * eps * kz2);
  });
  const Grid& gp = f.V.grid();
  double parallel = 0.0;
  for (std::size_t i = 0; i < f.V.size(); ++i) {
    const double k = gp.wavevector(i)[2];
    parallel += std::norm(f.V[i]) * kTwoPi * kTwoPi * k * k;
  }
  return kinetic + 0.5 * eps * drift + 0.5 * eps * parallel;
}

EpsDiagnostics EpsSolver::diagnostics(const EpsState& s, double delta) const {
  const EpsFields f = solve_eps_fields(s.rho, s.epsilon);
  SpectralField fluct = s.rho;
  fluct[0] -= 1.0;
  return {s.t,
          s.rho.mean().real(),
          energy(s),
          min_on_grid(s.rho),
          analytic_norm(s.rho, delta),
          analytic_norm(fluct, delta),
          analytic_norm(s.v, delta),
          std::sqrt(s.epsilon) * analytic_norm(f.e_par, delta)};
}

EpsState EpsSolver::integrate(EpsState s, double t_end, std::optional<double> dt,
                              const Observer& observe) const {
  if (observe) observe(s);
  const double span = t_end - s.t;
  if (span <= 0.0) return s;
  const double hmax = dt ? *dt : dt_max(s);
  if (!(hmax > 0.0)) throw ConfigurationError("time step must be positive");
  const auto steps = static_cast<long>(std::ceil(span / hmax - 1e-9));
  const double h = span / static_cast<double>(steps);
  const double t0 = s.t;
  for (long n = 1; n <= steps; ++n) {
    s = step(s, h);
    s.t = t0 + h * static_cast<double>(n);
    if (observe) observe(s);
  }
  return s;
}

}  // namespace driftfluid
