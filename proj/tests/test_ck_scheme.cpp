#include <doctest.h>

#include <cmath>
#include <random>

#include "driftfluid/ck_scheme.hpp"
#include "driftfluid/errors.hpp"
#include "driftfluid/random_fields.hpp"

using namespace driftfluid;
namespace {

EpsState small_data(const EpsSolver& solver, const Grid& g, unsigned seed, double rho_amp, double v_amp) {
  std::mt19937_64 rng(seed);
  SpectralField rho = random_band_field(g, BandSpec{1, rho_amp, DecayKind::flat, 0.5, true}, rng);
  SpectralField v = random_band_field(g, BandSpec{1, v_amp, DecayKind::flat, 0.5, true}, rng);
  rho[0] = 1.0;
  return solver.make_state_unchecked(rho, v);
}

CkIterate shifted(const CkIterate& base, const CkIterate& dir, double s, int n) {
  CkIterate out = base;
  out.n = n;
  for (std::size_t j = 0; j < base.size(); ++j) {
    out.rho[j].axpy(s, dir.rho[j]);
    out.w[j].axpy(s, dir.w[j]);
    out.G[j].axpy(s, dir.G[j]);
    out.sqrt_eps_e[j].axpy(s, dir.sqrt_eps_e[j]);
  }
  return out;
}

CkIterate random_iterate(const Grid& g, std::size_t count, double dt, unsigned seed) {
  std::mt19937_64 rng(seed);
  BandSpec b{2, 0.1, DecayKind::flat, 0.5, true};
  CkIterate it{0, dt, {}, {}, {}, {}};
  for (std::size_t j = 0; j < count; ++j) {
    it.rho.push_back(random_band_field(g, b, rng));
    it.w.push_back(random_band_field(g, b, rng));
    it.G.push_back(random_band_field(g.parallel_reduction(), b, rng));
    it.sqrt_eps_e.push_back(random_band_field(g.parallel_reduction(), b, rng));
  }
  return it;
}

}  // namespace

TEST_CASE("time grid covers the horizon") {
  Grid g(4, 4, 8);
  EpsSolver solver(EpsConfig{0.01});
  CkConfig c{0.01, NormParams{1.5, 1.2, 1.0, 0.5}};
  CkScheme scheme(c, solver.make_state(constant(g, 1.0), SpectralField(g)));
  CHECK(scheme.horizon() == doctest::Approx(0.3));
  CHECK(scheme.dt() * double(scheme.samples() - 1) == doctest::Approx(0.3));
  CHECK(scheme.dt() <= solver.oscillation_dt() + 1e-15);
}

TEST_CASE("equilibrium data converge at once") {
  Grid g(4, 4, 8);
  EpsSolver solver(EpsConfig{0.05});
  CkScheme scheme(CkConfig{0.05, NormParams{1.5, 1.2, 0.5, 0.5}},
                  solver.make_state(constant(g, 1.0), SpectralField(g)));
  auto res = scheme.run();
  CHECK(res.report.converged);
  REQUIRE(res.report.rows.size() == 1);
  CHECK(res.report.rows[0].total == 0.0);
  for (const auto& r : res.last.rho) CHECK((r - constant(g, 1.0)).max_abs() == 0.0);
}

TEST_CASE("iterate zero carries the free plasma oscillation") {
  const double eps = 0.04, se = std::sqrt(eps);
  Grid g(4, 4, 16);
  EpsSolver solver(EpsConfig{eps});
  SpectralField rho = constant(g, 1.0);
  rho.at(0, 0, 1) = rho.at(0, 0, -1) = 0.05 * se;
  EpsState s0 = solver.make_state(rho, SpectralField(g));
  CkScheme scheme(CkConfig{eps, NormParams{1.5, 1.2, 1.0, 0.5}}, s0);
  CkIterate it = scheme.initialize();
  const SpectralField e0 = solve_eps_fields(s0.rho, eps).e_par;
  for (std::size_t j = 0; j < it.size(); ++j) {
    const double t = it.time(j);
    CHECK((it.G[j] - se * std::sin(t / se) * e0).max_abs() < 1e-15);
    CHECK((it.sqrt_eps_e[j] - se * std::cos(t / se) * e0).max_abs() < 1e-15);
    CHECK((it.rho[j] - s0.rho).max_abs() == 0.0);
  }
}

TEST_CASE("contraction report on a synthetic geometric recursion") {
  Grid g(4, 4, 8);
  const NormParams p{1.5, 1.2, 1.0, 0.5};
  const CkIterate star = random_iterate(g, 6, 0.05, 1);
  const CkIterate dir = random_iterate(g, 6, 0.05, 2);
  for (double q : {0.3, 0.4, 0.8}) {
    std::vector<CkIterate> its;
    for (int n = 0; n < 6; ++n) its.push_back(shifted(star, dir, std::pow(q, n), n));
    ContractionReport rep = contraction_report(its, p);
    REQUIRE(rep.rows.size() == 5);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(std::abs(rep.rows[i].ratio - q) < 1e-10);
    CHECK(std::isnan(rep.rows[0].ratio));
    CHECK(rep.half_rate == (q <= 0.5));
    CHECK(rep.contracting);
  }
  std::vector<CkIterate> same{star, star, star};
  ContractionReport rep = contraction_report(same, p);
  for (const auto& r : rep.rows) CHECK(r.total == 0.0);
}

TEST_CASE("an RK4 trajectory is a fixed point up to quadrature error") {
  const double eps = 0.1;
  Grid g(4, 4, 16);
  EpsSolver solver(EpsConfig{eps});
  EpsState s0 = small_data(solver, g, 5, 0.02, 0.02);
  CkConfig c{eps, NormParams{1.5, 1.2, 1.0, 0.5}, 80.0};
  CkScheme scheme(c, s0);
  std::vector<EpsState> traj{s0};
  for (std::size_t j = 1; j < scheme.samples(); ++j) {
    EpsState next = traj.back();
    for (int sub = 0; sub < 4; ++sub) next = solver.step(next, scheme.dt() / 4);
    next.t = scheme.dt() * double(j);
    traj.push_back(next);
  }
  CkIterate x = scheme.from_states(traj);
  CkIterate y = scheme.iterate(x);
  ContractionRow d = iterate_difference(x, y, c.norm);
  CkIterate zero = scheme.initialize();
  ContractionRow size = iterate_difference(zero, x, c.norm);
  CHECK(d.total < 1e-5 * size.total);
}

TEST_CASE("contraction strengthens when eta shrinks") {
  const double eps = 0.1;
  Grid g(4, 4, 16);
  EpsSolver solver(EpsConfig{eps});
  EpsState s0 = small_data(solver, g, 7, 0.05, 0.05);
  auto max_ratio = [&](double eta) {
    CkScheme scheme(CkConfig{eps, NormParams{1.5, 1.2, eta, 0.5}}, s0);
    return scheme.run(5).report.max_ratio;
  };
  const double big = max_ratio(2.0), small = max_ratio(1.0);
  CHECK(small < big);
  CHECK(max_ratio(0.5) < small);
}

TEST_CASE("scheme rejects mismatched inputs") {
  Grid g(4, 4, 8);
  EpsSolver solver(EpsConfig{0.1});
  EpsState s = solver.make_state(constant(g, 1.0), SpectralField(g));
  CHECK_THROWS_AS(CkScheme(CkConfig{0.2}, s), ConfigurationError);
  EpsState late = s;
  late.t = 1.0;
  CHECK_THROWS_AS(CkScheme(CkConfig{0.1}, late), ConfigurationError);
  CkScheme scheme(CkConfig{0.1}, s);
  std::vector<EpsState> short_traj{s};
  CHECK_THROWS_AS(scheme.from_states(short_traj), ConfigurationError);
}
