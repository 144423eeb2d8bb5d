#include "driftfluid/toy_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "driftfluid/errors.hpp"
#include "driftfluid/field_solvers.hpp"

namespace driftfluid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_field(const SpectralField& f) {
  for (cplx c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e150) return false;
  return true;
}

SpectralField potential(const SpectralField& total, double eps) {
  if (std::abs(total.mean() - 1.0) > 1e-8)
    throw ConfigurationError("toy Poisson problem unsolvable: total density has mean " +
                             std::to_string(total.mean().real()));
  return solve_V(total, eps);
}

double gradient_energy(const SpectralField& V) {
  const Grid& g = V.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double k = kTwoPi * g.wavevector(i)[2];
    acc += std::norm(V[i]) * k * k;
  }
  return acc;
}

}  // namespace

SpectralField MultiPhaseState::total_density() const {
  SpectralField sum(rho.front().grid());
  for (const auto& r : rho) sum.axpy(1.0 / double(rho.size()), r);
  return sum;
}

void validate(const MultiPhaseState& s) {
  if (s.rho.empty() || s.rho.size() != s.u.size())
    throw ConfigurationError("multi-phase state needs matching, nonempty density and velocity lists");
  const Grid& g = s.rho.front().grid();
  if (!g.is_parallel_only()) throw ConfigurationError("the toy model lives on the parallel axis");
  for (std::size_t i = 0; i < s.rho.size(); ++i)
    if (!(s.rho[i].grid() == g) || !(s.u[i].grid() == g))
      throw ConfigurationError("phase fields on different grids");
  if (!(s.epsilon > 0.0)) throw ConfigurationError("epsilon must be positive");
  potential(s.total_density(), s.epsilon);
}

SpectralField toy_field(const MultiPhaseState& s) {
  return parallel_field(potential(s.total_density(), s.epsilon));
}

MultiPhaseTendency toy_rhs(const MultiPhaseState& s) {
  const Grid& g = s.rho.front().grid();
  const SpectralField E = toy_field(s);
  MultiPhaseTendency out;
  for (std::size_t p = 0; p < s.phases(); ++p) {
    const auto r = dealiased_values(s.rho[p]);
    const auto u = dealiased_values(s.u[p]);
    const auto du = dealiased_values(derivative(s.u[p], Axis::parallel));
    SpectralField dr = -derivative(product_from_values(g, r, u, true), Axis::parallel);
    dr[0] = 0.0;
    SpectralField dv = E - product_from_values(g, u, du, true);
    out.rho.push_back(std::move(dr));
    out.u.push_back(std::move(dv));
  }
  return out;
}

MultiPhaseState toy_step(const MultiPhaseState& s, double dt) {
  auto stage = [&](const MultiPhaseTendency& k, double h) {
    MultiPhaseState y = s;
    for (std::size_t p = 0; p < s.phases(); ++p) {
      y.rho[p].axpy(h, k.rho[p]);
      y.u[p].axpy(h, k.u[p]);
    }
    return y;
  };
  const auto k1 = toy_rhs(s);
  const auto k2 = toy_rhs(stage(k1, 0.5 * dt));
  const auto k3 = toy_rhs(stage(k2, 0.5 * dt));
  const auto k4 = toy_rhs(stage(k3, dt));
  MultiPhaseState out = s;
  const double w = dt / 6.0;
  for (std::size_t p = 0; p < s.phases(); ++p) {
    out.rho[p].axpy(w, k1.rho[p]).axpy(2 * w, k2.rho[p]).axpy(2 * w, k3.rho[p]).axpy(w, k4.rho[p]);
    out.rho[p][0] = s.rho[p][0];
    out.u[p].axpy(w, k1.u[p]).axpy(2 * w, k2.u[p]).axpy(2 * w, k3.u[p]).axpy(w, k4.u[p]);
    if (!finite_field(out.rho[p]) || !finite_field(out.u[p]))
      throw BlowUpError("toy model: non-finite state at t = " + std::to_string(s.t + dt), s.t);
  }
  out.t = s.t + dt;
  return out;
}

double toy_dt_max(const MultiPhaseState& s) {
  double umax = 0.0;
  for (const auto& u : s.u) {
    const auto v = inverse(u);
    for (double x : v) umax = std::max(umax, std::abs(x));
  }
  const double n = s.rho.front().grid().n(Axis::parallel);
  const double osc = kTwoPi * std::sqrt(s.epsilon) / 40.0;
  return umax > 0.0 ? std::min(0.5 / (umax * n), osc) : osc;
}

double toy_energy(const MultiPhaseState& s) {
  double kinetic = 0.0;
  for (std::size_t p = 0; p < s.phases(); ++p) {
    const auto r = dealiased_values(s.rho[p]);
    const auto u = dealiased_values(s.u[p]);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r[i].real() * u[i].real() * u[i].real();
    kinetic += acc / double(r.size()) / double(s.phases());
  }
  const SpectralField V = potential(s.total_density(), s.epsilon);
  return 0.5 * kinetic + 0.5 * s.epsilon * gradient_energy(V);
}

std::vector<SpectralField> ReferenceFlow::density(double t) const {
  std::vector<SpectralField> out = rho0;
  for (std::size_t p = 0; p < out.size(); ++p) {
    const Grid& g = out[p].grid();
    for (std::size_t i = 0; i < out[p].size(); ++i)
      out[p][i] *= std::polar(1.0, -kTwoPi * g.wavevector(i)[2] * u[p] * t);
  }
  return out;
}

double relative_entropy(const MultiPhaseState& s, const ReferenceFlow& ref) {
  if (ref.rho0.size() != s.phases() || ref.u.size() != s.phases())
    throw ConfigurationError("reference flow has a different number of phases");
  double kinetic = 0.0;
  for (std::size_t p = 0; p < s.phases(); ++p) {
    const auto r = dealiased_values(s.rho[p]);
    const auto u = dealiased_values(s.u[p]);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double d = u[i].real() - ref.u[p];
      acc += r[i].real() * d * d;
    }
    kinetic += acc / double(r.size()) / double(s.phases());
  }
  MultiPhaseState rs{s.t, s.epsilon, ref.density(s.t), s.u};
  const SpectralField dV = potential(s.total_density(), s.epsilon) - potential(rs.total_density(), s.epsilon);
  return 0.5 * kinetic + 0.5 * s.epsilon * gradient_energy(dV);
}

std::vector<double> phase_masses(const MultiPhaseState& s) {
  std::vector<double> m;
  for (const auto& r : s.rho) m.push_back(r.mean().real());
  return m;
}

BranchSetup stable_branch(const DichotomyConfig& c, double eps) {
  const Grid g = Grid::parallel_only(c.npar);
  SpectralField r0 = constant(g, 1.0), r1 = constant(g, 1.0);
  r0.at(0, 0, 1) += 0.5 * c.density_contrast;
  r0.at(0, 0, -1) += 0.5 * c.density_contrast;
  r1.at(0, 0, 1) -= 0.5 * c.density_contrast;
  r1.at(0, 0, -1) -= 0.5 * c.density_contrast;
  SpectralField u = constant(g, c.drift_speed);
  const double a = std::sqrt(eps) * c.well_prepared_amplitude;
  u.at(0, 0, 1) += cplx(0.0, -0.5 * a);
  u.at(0, 0, -1) += cplx(0.0, 0.5 * a);
  MultiPhaseState s{0.0, eps, {r0, r1}, {u, u}};
  return {s, ReferenceFlow{{r0, r1}, {c.drift_speed, c.drift_speed}}};
}

BranchSetup unstable_branch(const DichotomyConfig& c, double eps) {
  const Grid g = Grid::parallel_only(c.npar);
  const SpectralField one = constant(g, 1.0);
  SpectralField up = constant(g, c.stream_speed), um = constant(g, -c.stream_speed);
  // Counter-phase perturbation: a common one mostly excites the plasma
  // oscillation and barely reaches the growing mode when ε is small.
  for (auto [f, sign] : {std::pair{&up, 1.0}, std::pair{&um, -1.0}}) {
    f->at(0, 0, 1) += cplx(0.0, -0.5 * sign * c.perturbation);
    f->at(0, 0, -1) += cplx(0.0, 0.5 * sign * c.perturbation);
  }
  MultiPhaseState s{0.0, eps, {one, one}, {up, um}};
  return {s, ReferenceFlow{{one, one}, {c.stream_speed, -c.stream_speed}}};
}

BranchResult run_branch(const BranchSetup& setup, double t_end,
                        const std::function<void(const MultiPhaseState&)>& observe) {
  MultiPhaseState s = setup.initial;
  validate(s);
  BranchResult r{s.epsilon, relative_entropy(s, setup.reference), 0.0, 0.0, false, 0.0};
  const double e0 = toy_energy(s);
  double e_prev = e0;
  if (observe) observe(s);
  const double hmax = toy_dt_max(s);
  const auto steps = static_cast<long>(std::ceil(t_end / hmax - 1e-9));
  const double h = t_end / double(steps);
  for (long n = 1; n <= steps; ++n) {
    try {
      MultiPhaseState next = toy_step(s, h);
      next.t = h * double(n);
      for (const auto& rho : next.rho)
        for (double x : inverse(rho))
          if (x < 0.0) throw BlowUpError("toy model: negative density", next.t);
      s = std::move(next);
      if (observe) observe(s);
    } catch (const BlowUpError&) {
      r.blew_up = true;
      break;
    }
    const double e = toy_energy(s);
    r.max_energy_increase = std::max(r.max_energy_increase, (e - e_prev) / std::max(e0, 1e-300));
    e_prev = e;
  }
  r.t_final = s.t;
  r.h_final = relative_entropy(s, setup.reference);
  return r;
}

DichotomyReport dichotomy_experiment(const DichotomyConfig& c) {
  DichotomyReport rep;
  for (double eps : c.epsilons) {
    rep.stable.push_back(run_branch(stable_branch(c, eps), c.t_end));
    rep.unstable.push_back(run_branch(unstable_branch(c, eps), c.t_end));
  }
  rep.stable_decreasing = rep.unstable_nondecreasing = c.epsilons.size() >= 2;
  for (std::size_t i = 1; i < c.epsilons.size(); ++i) {
    if (!(rep.stable[i].h_final < rep.stable[i - 1].h_final)) rep.stable_decreasing = false;
    if (!(rep.unstable[i].h_final >= rep.unstable[i - 1].h_final)) rep.unstable_nondecreasing = false;
  }
  return rep;
}

}  // namespace driftfluid
