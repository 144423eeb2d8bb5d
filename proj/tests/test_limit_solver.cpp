#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "driftfluid/errors.hpp"
#include "driftfluid/limit_solver.hpp"
#include "driftfluid/random_fields.hpp"
#include "support/oracles.hpp"

using namespace driftfluid;
namespace {

constexpr double kPi = std::numbers::pi;

LimitState random_limit_state(const Grid& g, unsigned seed, double rho_amp, double v_amp) {
  std::mt19937_64 rng(seed);
  SpectralField rho = random_band_field(g, BandSpec{2, rho_amp, DecayKind::flat, 0.5, true}, rng);
  rho[0] = 1.0;
  SpectralField v = random_band_field(g, BandSpec{1, v_amp, DecayKind::flat, 0.5, false}, rng);
  return project_initial(rho, v);
}

}  // namespace

TEST_CASE("pressure gradient examples") {
  Grid g(4, 4, 16);
  std::mt19937_64 rng(1);
  SpectralField rho = random_band_field(g, BandSpec{2, 0.2, DecayKind::flat, 0.5, true}, rng);
  rho[0] = 1.0;
  CHECK(pressure_gradient(rho, SpectralField(g)).max_abs() == 0.0);

  SpectralField v = forward(g, oracle::sample(g, [](double, double, double z) { return 0.3 * std::cos(2 * kPi * z); }));
  SpectralField dp = pressure_gradient(constant(g, 1.0), v);
  SpectralField expect = -1.0 * perp_average(derivative(product(v, v), Axis::parallel));
  CHECK((dp - expect).max_abs() < 1e-14);
  CHECK(std::abs(dp.mean()) == 0.0);
}

TEST_CASE("rest state is an equilibrium of the limit system") {
  Grid g(4, 4, 8);
  LimitSolver solver;
  LimitState s{0.0, constant(g, 1.0), SpectralField(g), false};
  LimitTendency t = solver.rhs(s);
  CHECK(t.rho.max_abs() == 0.0);
  CHECK(t.v.max_abs() == 0.0);
}

TEST_CASE("project_initial: constraints, idempotence and forced mean") {
  Grid g(8, 8, 16);
  LimitState p = random_limit_state(g, 3, 0.2, 0.3);
  CHECK(density_constraint_residual(p.rho) < 1e-14);
  CHECK(constraint_residual(p.rho, p.v) < 1e-12);
  CHECK(std::abs(p.rho.mean() - 1.0) < 1e-15);

  LimitState q = project_initial(p.rho, p.v);
  CHECK((q.rho - p.rho).max_abs() < 1e-15);
  CHECK((q.v - p.v).max_abs() < 1e-14);

  SpectralField a = forward(g, oracle::sample(g, [](double, double, double z) { return 0.4 + 0.2 * std::sin(2 * kPi * z); }));
  LimitState forced = project_initial(constant(g, 1.0), a);
  CHECK((forced.v - constant(g, 0.4)).max_abs() < 1e-15);
}

TEST_CASE("project_initial rejects nonpositive densities") {
  Grid g(4, 4, 8);
  SpectralField rho = constant(g, 1.0);
  rho.at(1, 0, 0) = rho.at(-1, 0, 0) = 0.7;
  CHECK_THROWS_AS(project_initial(rho, SpectralField(g)), DomainError);
}

TEST_CASE("constraint is kept by the closure and lost without it") {
  Grid g(8, 8, 16);
  LimitState s0 = random_limit_state(g, 7, 0.1, 0.2);
  LimitSolver with;
  LimitSolver without(LimitConfig{false});
  const double h = std::min(0.5 * with.dt_max(s0), 5e-3);
  LimitState a = s0, b = s0;
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    a = with.step(a, h);
    b = without.step(b, h);
    worst = std::max(worst, constraint_residual(a.rho, a.v));
  }
  CHECK(worst < 1e-8);
  CHECK_FALSE(a.constraint_flag);
  CHECK(constraint_residual(b.rho, b.v) > 1e-4);
  // ∂t∫ρ dx⊥ = -∂∥∫ρv dx⊥, so the density constraint drifts by at most ∫ of that residual.
  CHECK(density_constraint_residual(a.rho) <= 100 * h * worst);
  CHECK(std::abs(a.rho.mean() - 1.0) < 1e-14);
}

TEST_CASE("rhs keeps the k_perp = 0 part of rho fixed") {
  Grid g(8, 8, 16);
  LimitState s = random_limit_state(g, 9, 0.2, 0.2);
  LimitTendency t = LimitSolver().rhs(s);
  CHECK(perp_average(t.rho).max_abs() < 1e-15);
}

TEST_CASE("limit perp field inverts the perpendicular Laplacian") {
  Grid g(8, 8, 8);
  LimitState s = random_limit_state(g, 11, 0.2, 0.0);
  PerpField e = limit_perp_field(s.rho);
  PerpField ref = perp_field(solve_phi(s.rho, 0.0));
  CHECK((e.e1 - ref.e1).max_abs() < 1e-15);
  // ∂₁E₂ - ∂₂E₁ = Δ⊥φ = -(ρ - ∫ρ dx⊥)
  SpectralField lap = derivative(e.e2, Axis::perp1) - derivative(e.e1, Axis::perp2);
  CHECK((lap + remove_perp_average(s.rho)).max_abs() < 1e-13);
}

TEST_CASE("shear flows: pure 2D shear is steady, zero profile is rest") {
  Grid g(16, 1, 8);
  SpectralField phi = forward(g, oracle::sample(g, [](double x, double, double) { return 0.05 * std::sin(2 * kPi * x); }));
  SpectralField v = forward(g, oracle::sample(g, [](double x, double, double) { return 0.3 * std::cos(2 * kPi * x); }));
  LimitState s = shear_flow(phi, v);
  SpectralField rho_expect = constant(g, 1.0) - derivative(phi, Axis::perp1);
  CHECK((s.rho - rho_expect).max_abs() < 1e-15);
  LimitTendency t = LimitSolver().rhs(s);
  CHECK(t.rho.max_abs() < 1e-15);
  CHECK(t.v.max_abs() < 1e-15);

  LimitState z = shear_flow(SpectralField(g), SpectralField(g));
  CHECK((z.rho - constant(g, 1.0)).max_abs() == 0.0);
  CHECK(z.v.max_abs() == 0.0);
}

TEST_CASE("shear flow with parallel structure stays free of x2 dependence") {
  Grid g(16, 4, 16);
  SpectralField phi = forward(
      g, oracle::sample(g, [](double x, double, double z) { return 0.03 * std::sin(2 * kPi * x) * (1 + 0.5 * std::cos(2 * kPi * z)); }));
  SpectralField v = forward(g, oracle::sample(g, [](double x, double, double z) { return 0.2 * std::cos(2 * kPi * (x + z)); }));
  LimitState s = shear_flow(phi, v);
  LimitSolver solver;
  for (int n = 0; n < 20; ++n) s = solver.step(s, 0.01);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g.wavevector(i)[1] != 0) {
      CHECK(std::abs(s.rho[i]) < 1e-15);
      CHECK(std::abs(s.v[i]) < 1e-15);
    }
  CHECK(constraint_residual(s.rho, s.v) < 1e-8);
}

TEST_CASE("shear_flow rejects x2 dependence") {
  Grid g(4, 4, 4);
  SpectralField phi(g);
  phi.at(0, 1, 0) = phi.at(0, -1, 0) = 0.1;
  CHECK_THROWS_AS(shear_flow(phi, SpectralField(g)), ConfigurationError);
}

TEST_CASE("parallel-independent data follow 2D Euler") {
  Grid g(16, 16, 1);
  std::mt19937_64 rng(13);
  SpectralField rho = random_band_field(g, BandSpec{3, 0.2, DecayKind::flat, 0.5, true}, rng);
  rho[0] = 1.0;
  SpectralField v = random_band_field(g, BandSpec{3, 0.3, DecayKind::flat, 0.5, true}, rng);
  LimitState s = project_initial(rho, v);
  oracle::Euler2d euler(16, 16);
  // ω = -Δψ with E⊥ = (-∂₂φ, ∂₁φ) = u, so ψ = φ and ω = ρ - 1.
  oracle::Euler2d::State e{std::vector<cplx>(256), std::vector<cplx>(256)};
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      e.omega[std::size_t(i * 16 + j)] = s.rho[g.flat(i, j, 0)];
      e.c[std::size_t(i * 16 + j)] = s.v[g.flat(i, j, 0)];
    }
  e.omega[0] = 0.0;
  LimitSolver solver;
  const double h = 0.5 * solver.dt_max(s);
  for (int n = 0; n < 50; ++n) {
    s = solver.step(s, h);
    e = euler.step(e, h);
  }
  double err = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const std::size_t q = std::size_t(i * 16 + j);
      err = std::max(err, std::abs(s.rho[g.flat(i, j, 0)] - (q == 0 ? 1.0 : e.omega[q])));
      err = std::max(err, std::abs(s.v[g.flat(i, j, 0)] - e.c[q]));
    }
  CHECK(err < 1e-10);
}
