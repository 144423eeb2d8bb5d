#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "driftfluid/errors.hpp"
#include "driftfluid/instability_lab.hpp"
#include "support/oracles.hpp"

using namespace driftfluid;
namespace {

constexpr double kPi = std::numbers::pi;

SpectralField cosine(const Grid& g, double mean, double amp, int k = 1) {
  SpectralField f = constant(g, mean);
  f.at(0, 0, k) += 0.5 * amp;
  f.at(0, 0, -k) += 0.5 * amp;
  return f;
}

}  // namespace

TEST_CASE("common velocity translates both phases rigidly") {
  Grid g = Grid::parallel_only(32);
  const double c = 0.7;
  TwoPhaseState s{0.0, cosine(g, 0.5, 0.1), constant(g, c), constant(g, c)};
  TwoPhaseTendency t = two_phase_rhs(s);
  CHECK((t.rho1 + c * derivative(s.rho1, Axis::parallel)).max_abs() < 1e-15);
  CHECK(t.v1.max_abs() < 1e-15);
  CHECK(t.v2.max_abs() < 1e-15);
  CHECK_FALSE(t.interior_breach);
}

TEST_CASE("constant counter-streaming state is stationary") {
  Grid g = Grid::parallel_only(16);
  TwoPhaseState s{0.0, constant(g, 0.5), constant(g, 1.0), constant(g, -1.0)};
  TwoPhaseTendency t = two_phase_rhs(s);
  CHECK(t.rho1.max_abs() == 0.0);
  CHECK(t.v1.max_abs() == 0.0);
  CHECK(t.v2.max_abs() == 0.0);
}

TEST_CASE("two-phase closure kills the parallel momentum divergence") {
  Grid g = Grid::parallel_only(32);
  TwoPhaseState s{0.0, cosine(g, 0.4, 0.1, 2), cosine(g, 0.3, 0.2), cosine(g, -0.2, 0.1, 3)};
  // Put the data on the constraint set first.
  s = extract_two_phase(project_initial(embed_two_phase(s).rho, embed_two_phase(s).v));
  TwoPhaseTendency t = two_phase_rhs(s);
  const SpectralField rho2 = s.rho2();
  SpectralField dq = product(t.rho1, s.v1) + product(s.rho1, t.v1) - product(t.rho1, s.v2) + product(rho2, t.v2);
  dq[0] = 0.0;
  CHECK(dq.max_abs() < 1e-13);
}

TEST_CASE("phase masses are conserved along a run") {
  Grid g = Grid::parallel_only(32);
  TwoPhaseState s{0.0, cosine(g, 0.5, 0.05), constant(g, 0.3), constant(g, -0.3)};
  s = extract_two_phase(project_initial(embed_two_phase(s).rho, embed_two_phase(s).v));
  const double m1 = s.rho1.mean().real();
  for (int n = 0; n < 200; ++n) s = two_phase_step(s, 2e-3);
  CHECK(std::abs(s.rho1.mean().real() - m1) < 1e-12);
  CHECK(std::abs(s.rho2().mean().real() - (1.0 - m1)) < 1e-12);
}

TEST_CASE("leaving the interior is flagged") {
  Grid g = Grid::parallel_only(16);
  TwoPhaseState s{0.0, cosine(g, 0.5, 1.2), constant(g, 0.0), constant(g, 0.0)};
  CHECK(two_phase_rhs(s, 1e-6).interior_breach);
}

TEST_CASE("embedding round trip is exact") {
  Grid g = Grid::parallel_only(16);
  TwoPhaseState s{0.25, cosine(g, 0.4, 0.1), cosine(g, 0.3, 0.2), cosine(g, -0.2, 0.1, 2)};
  LimitState e = embed_two_phase(s, 8);
  CHECK(e.rho.grid().n(Axis::perp1) == 8);
  CHECK_FALSE(e.rho.grid().is_dealiased(Axis::perp1));
  TwoPhaseState back = extract_two_phase(e);
  CHECK((back.rho1 - s.rho1).max_abs() < 1e-15);
  CHECK((back.v1 - s.v1).max_abs() < 1e-15);
  CHECK((back.v2 - s.v2).max_abs() < 1e-15);
}

TEST_CASE("linear symbol: single stream is neutral") {
  for (double rho1 : {0.2, 0.5, 0.8})
    for (int k : {1, 3}) {
      auto sig = linear_growth(Background{rho1, 0.4, 0.4}, k);
      // The eigenvalue u is defective here, so roundoff enters as its square root.
      for (cplx s : sig) CHECK(std::abs(s.real()) < 1e-6 * k);
    }
}

TEST_CASE("linear symbol: growth is linear in k and the -k spectrum is conjugate") {
  const Background bg{0.5, 1.0, -1.0};
  for (int k : {1, 2, 5}) {
    auto a = linear_growth(bg, k), b = linear_growth(bg, 2 * k);
    CHECK(a[0].real() > 0.0);
    CHECK(std::abs(b[0].real() - 2.0 * a[0].real()) < 1e-8);
  }
  for (const Background& bg2 : {bg, Background{0.3, 0.7, -0.2}, Background{0.6, 0.1, 0.1}}) {
    auto sig = linear_growth(bg2, 3), mirror = linear_growth(bg2, -3);
    for (cplx s : sig) {
      double best = 1e300;
      for (cplx t : mirror) best = std::min(best, std::abs(t - std::conj(s)));
      CHECK(best < 1e-10);
    }
  }
  CHECK_THROWS_AS(linear_growth(Background{1.0, 1.0, -1.0}, 1), DomainError);
}

TEST_CASE("linear symbol matches the characteristic polynomial") {
  const Background bg{0.3, 0.8, -0.4};
  auto A = linear_symbol(bg);
  const int k = 2;
  for (cplx s : linear_growth(bg, k)) {
    // σ = -i2πkλ with det(A - λI) = 0.
    const cplx lam = s / cplx(0.0, -2 * kPi * k);
    std::array<std::array<cplx, 4>, 4> m{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = A[i][j] - (i == j ? lam : cplx(0.0));
    // Determinant by elimination with partial pivoting.
    cplx det = 1.0;
    for (int c = 0; c < 4; ++c) {
      int p = c;
      for (int r = c + 1; r < 4; ++r)
        if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
      if (p != c) {
        std::swap(m[p], m[c]);
        det = -det;
      }
      det *= m[c][c];
      if (std::abs(m[c][c]) == 0.0) break;
      for (int r = c + 1; r < 4; ++r) {
        const cplx f = m[r][c] / m[c][c];
        for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
      }
    }
    CHECK(std::abs(det) < 1e-10);
  }
}

TEST_CASE("stable background shows no growth") {
  GrowthConfig c;
  c.background = Background{0.5, 0.3, 0.3};
  c.npar = 32;
  c.t_end = 0.5;
  c.dt = 1e-3;
  for (const auto& row : growth_experiment(c, 2)) {
    CHECK(row.re_lin == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(row.sigma_meas) < 1e-3);
    CHECK_FALSE(row.window_reached);
  }
}

TEST_CASE("growth experiment rejects modes outside the band") {
  GrowthConfig c;
  c.npar = 16;
  CHECK_THROWS_AS(growth_experiment(c, 6), ConfigurationError);
}

TEST_CASE("seeded state has the requested norm and linear momentum balance") {
  const Background bg{0.5, 1.0, -1.0};
  const double l2 = 1e-5;
  TwoPhaseState s = seeded_state(bg, 64, BandSpec{10, 1.0, DecayKind::analytic, 0.5}, l2, 3);
  SpectralField r = s.rho1, a = s.v1, b = s.v2;
  r[0] -= bg.rho1;
  a[0] -= bg.v1;
  b[0] -= bg.v2;
  // Norm of the whole perturbation (r₁, a, b), with a = b = -(v̄₁ - v̄₂) r₁.
  CHECK(std::hypot(l2_norm(r), l2_norm(a), l2_norm(b)) == doctest::Approx(l2).epsilon(1e-12));
  CHECK((a + 2.0 * r).max_abs() < 1e-20);
  SpectralField q = product(s.rho1, s.v1) + product(s.rho2(), s.v2);
  q[0] = 0.0;
  CHECK(l2_norm(q) < 10 * l2 * l2);
}

TEST_CASE("fit_exponential recovers an exact rate") {
  std::vector<double> t, y;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(1.7 * 0.1 * i));
  }
  ExpFit f = fit_exponential(t, y);
  CHECK(f.rate == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.points == 20);
}
