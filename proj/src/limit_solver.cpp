#include "driftfluid/limit_solver.hpp"

#include <algorithm>
#include <cmath>

#include "driftfluid/errors.hpp"

namespace driftfluid {

namespace {

bool finite_field(const SpectralField& f) {
  for (cplx c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e150) return false;
  return true;
}

double max_abs_values(const SpectralField& f) {
  const auto v = inverse_complex(f);
  return kernels::max(v.size(), [&](std::size_t i) { return std::abs(v[i].real()); }, 0.0);
}

}  // namespace

SpectralField pressure_gradient(const SpectralField& rho, const SpectralField& v) {
  SpectralField q = perp_average(product(rho, product(v, v)));
  SpectralField dp = -derivative(q, Axis::parallel);
  dp[0] = 0.0;
  return dp;
}

PerpField limit_perp_field(const SpectralField& rho) { return perp_field(solve_phi(rho, 0.0)); }

double constraint_residual(const SpectralField& rho, const SpectralField& v) {
  return l2_norm(derivative(perp_average(product(rho, v)), Axis::parallel));
}

double density_constraint_residual(const SpectralField& rho) {
  SpectralField r = perp_average(rho);
  r[0] = 0.0;
  return l2_norm(r);
}

LimitState project_initial(SpectralField rho0, SpectralField v0) {
  if (!rho0.grid().same_shape(v0.grid())) throw ConfigurationError("rho and v grids differ");
  rho0 = dealias(std::move(rho0));
  const auto vals = inverse(rho0);
  const double lo = *std::min_element(vals.begin(), vals.end());
  if (!(lo > 0.0)) throw DomainError("initial density not positive (min " + std::to_string(lo) + ")");
  const Grid& g = rho0.grid();
  for (int i = 0; i < g.n(Axis::parallel); ++i) rho0[g.flat(0, 0, i)] = 0.0;
  rho0[0] = 1.0;
  SpectralField v = dealias(std::move(v0));
  SpectralField J = perp_average(product(rho0, v));
  J[0] = 0.0;
  // ∫ρ dx⊥ = 1 after the projection, so the division is trivial.
  v -= broadcast(J, g);
  return LimitState{0.0, std::move(rho0), std::move(v), false};
}

LimitState shear_flow(const SpectralField& phi_profile, const SpectralField& v_profile) {
  const Grid& g = phi_profile.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.wavevector(i)[1] != 0 && (std::abs(phi_profile[i]) > 0.0 || std::abs(v_profile[i]) > 0.0))
      throw ConfigurationError("shear profiles must not depend on x2");
  }
  SpectralField rho = -derivative(phi_profile, Axis::perp1);
  rho[0] += 1.0;
  return project_initial(std::move(rho), v_profile);
}

LimitSolver::LimitSolver(LimitConfig config) : config_(config) {
  if (!(config_.cfl > 0.0)) throw ConfigurationError("cfl must be positive");
}

LimitTendency LimitSolver::rhs(const LimitState& s) const {
  const Grid& g = s.rho.grid();
  const auto r = dealiased_values(s.rho);
  const auto v = dealiased_values(s.v);
  const auto dv = dealiased_values(derivative(s.v, Axis::parallel));

  LimitTendency out{SpectralField(g), SpectralField(g)};
  out.rho.axpy(-1.0, derivative(product_from_values(g, v, r, true), Axis::parallel));
  out.v.axpy(-1.0, product_from_values(g, v, dv, true));
  if (!perp_transport_vanishes(g)) {
    const PerpField e = limit_perp_field(s.rho);
    const auto e1 = dealiased_values(e.e1);
    const auto e2 = dealiased_values(e.e2);
    out.rho.axpy(-1.0, derivative(product_from_values(g, e1, r, true), Axis::perp1));
    out.rho.axpy(-1.0, derivative(product_from_values(g, e2, r, true), Axis::perp2));
    out.v.axpy(-1.0, derivative(product_from_values(g, e1, v, true), Axis::perp1));
    out.v.axpy(-1.0, derivative(product_from_values(g, e2, v, true), Axis::perp2));
  }
  out.rho[0] = 0.0;
  if (config_.pressure_closure) {
    // Pressure chosen so that the k∥ ≠ 0 modes of d/dt ∫ρv dx⊥ vanish for the
    // discrete tendencies; in the continuum this is -∂∥∫ρv² dx⊥.
    const auto rt = dealiased_values(out.rho);
    const auto vt = dealiased_values(out.v);
    SpectralField D = perp_average(product_from_values(g, rt, v, true));
    D += perp_average(product_from_values(g, r, vt, true));
    D[0] = 0.0;
    out.v -= broadcast(D, g);
  }
  return out;
}

LimitState LimitSolver::step(const LimitState& s, double dt) const {
  auto stage = [&](const LimitTendency& k, double h) {
    LimitState y = s;
    y.rho.axpy(h, k.rho);
    y.v.axpy(h, k.v);
    return y;
  };
  const LimitTendency k1 = rhs(s);
  const LimitTendency k2 = rhs(stage(k1, 0.5 * dt));
  const LimitTendency k3 = rhs(stage(k2, 0.5 * dt));
  const LimitTendency k4 = rhs(stage(k3, dt));
  LimitState out = s;
  const double w = dt / 6.0;
  out.rho.axpy(w, k1.rho).axpy(2 * w, k2.rho).axpy(2 * w, k3.rho).axpy(w, k4.rho);
  out.v.axpy(w, k1.v).axpy(2 * w, k2.v).axpy(2 * w, k3.v).axpy(w, k4.v);
  out.rho[0] = 1.0;
  out.t = s.t + dt;
  if (!finite_field(out.rho) || !finite_field(out.v))
    throw BlowUpError("limit solver: non-finite state at t = " + std::to_string(out.t), s.t);
  if (config_.pressure_closure &&
      constraint_residual(out.rho, out.v) > config_.constraint_tolerance)
    out.constraint_flag = true;
  return out;
}

double LimitSolver::dt_max(const LimitState& s) const {
  const Grid& g = s.rho.grid();
  double rate = max_abs_values(s.v) * g.n(Axis::parallel);
  if (!perp_transport_vanishes(g)) {
    const PerpField e = limit_perp_field(s.rho);
    rate += max_abs_values(e.e1) * g.n(Axis::perp1) + max_abs_values(e.e2) * g.n(Axis::perp2);
  }
  return rate > 0.0 ? config_.cfl / rate : 1e-2;
}

LimitState LimitSolver::integrate(LimitState s, double t_end, std::optional<double> dt,
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
