#include "driftfluid/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "driftfluid/ck_scheme.hpp"
#include "driftfluid/csv.hpp"
#include "driftfluid/eps_solver.hpp"
#include "driftfluid/errors.hpp"
#include "driftfluid/instability_lab.hpp"
#include "driftfluid/limit_solver.hpp"
#include "driftfluid/oscillation.hpp"
#include "driftfluid/random_fields.hpp"
#include "driftfluid/serialization.hpp"

namespace driftfluid {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------- parsing

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigurationError(where() + ": expected an object");
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigurationError(child(key) + ": " + e.what());
    }
  }

  template <class T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception& e) {
      throw ConfigurationError(child(key) + ": " + e.what());
    }
  }

  std::optional<Reader> object(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return std::nullopt;
    return Reader(*it, child(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigurationError(child(it.key()) + ": unknown key");
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigurationError(key + ": " + what);
}

const std::set<std::string>& experiment_names() {
  static const std::set<std::string> names{"eps_run", "eps_sweep", "limit_run",
                                           "contraction", "growth", "dichotomy"};
  return names;
}

const std::set<std::string>& preset_names() {
  static const std::set<std::string> names{"equilibrium", "single_mode", "shear", "two_stream",
                                           "random_band"};
  return names;
}

DecayKind decay_kind(const std::string& s) {
  if (s == "analytic") return DecayKind::analytic;
  if (s == "algebraic") return DecayKind::algebraic;
  if (s == "flat") return DecayKind::flat;
  throw ConfigurationError("initial.decay: expected analytic, algebraic or flat, got '" + s + "'");
}

// ----------------------------------------------------------- initial data

double periodic_bump(double x, double centre, double width) {
  double d = std::fmod(x - centre + 1.5, 1.0) - 0.5;
  return std::exp(-0.5 * (d / width) * (d / width));
}

Grid config_grid(const RunConfig& c) { return Grid(c.grid[0], c.grid[1], c.grid[2]); }

/// Shear data: densities concentrated near x₁ = 1/4 and 3/4, each bump with its own velocity.
std::pair<SpectralField, SpectralField> shear_profiles(const RunConfig& c) {
  const InitialSpec& in = c.initial;
  const Grid g = config_grid(c);
  const int n1 = g.n(Axis::perp1), n2 = g.n(Axis::perp2), np = g.n(Axis::parallel);
  const std::size_t nb = in.widths.size();
  std::vector<std::vector<double>> bumps(nb, std::vector<double>(static_cast<std::size_t>(n1)));
  for (std::size_t b = 0; b < nb; ++b) {
    const double centre = (double(b) + 0.5) / double(nb);
    double mean = 0.0;
    for (int i = 0; i < n1; ++i) mean += bumps[b][i] = periodic_bump(double(i) / n1, centre, in.widths[b]);
    mean /= n1;
    for (auto& x : bumps[b]) x /= mean;
  }
  double total = 0.0;
  for (double a : in.bump_amplitudes) total += a;
  std::vector<double> rho(g.size()), v(g.size());
  for (int i = 0; i < n1; ++i) {
    double r = 1.0 - total, mom = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      r += in.bump_amplitudes[b] * bumps[b][static_cast<std::size_t>(i)];
      mom += in.bump_amplitudes[b] * bumps[b][static_cast<std::size_t>(i)] * in.velocities[b];
    }
    for (int i2 = 0; i2 < n2; ++i2)
      for (int j = 0; j < np; ++j) {
        const double mod = 1.0 + in.perturbation * std::cos(kTwoPi * double(j) / np);
        const auto idx = g.flat(i, i2, j);
        rho[idx] = 1.0 + (r - 1.0) * mod;
        v[idx] = mom / r;
      }
  }
  return {forward(g, rho), forward(g, v)};
}

SpectralField shear_potential(const SpectralField& rho) {
  // ρ = 1 - ∂₁φ.
  const Grid& g = rho.grid();
  SpectralField phi(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int k1 = g.wavevector(i)[0];
    if (k1 == 0 || g.is_nyquist(g.wavevector(i))) continue;
    phi[i] = -rho[i] / cplx(0.0, kTwoPi * k1);
  }
  return phi;
}

TwoPhaseState two_stream_state(const RunConfig& c) {
  const InitialSpec& in = c.initial;
  const Grid gp = Grid::parallel_only(c.grid[2]);
  TwoPhaseState s{0.0, constant(gp, in.rho1), constant(gp, in.stream), constant(gp, -in.stream)};
  const double drift = 2.0 * in.stream;
  for (int k : {1, -1}) {
    s.rho1.at(0, 0, k) += 0.5 * in.perturbation;
    s.v1.at(0, 0, k) -= 0.5 * in.perturbation * drift;
    s.v2.at(0, 0, k) -= 0.5 * in.perturbation * drift;
  }
  return s;
}

std::pair<SpectralField, SpectralField> eps_initial(const RunConfig& c, double eps) {
  const InitialSpec& in = c.initial;
  const Grid g = config_grid(c);
  if (in.preset == "equilibrium") return {constant(g, 1.0), SpectralField(g)};
  if (in.preset == "single_mode") {
    SpectralField rho = constant(g, 1.0);
    rho.at(0, 0, in.k_par) += 0.5 * in.amplitude * std::sqrt(eps);
    rho.at(0, 0, -in.k_par) += 0.5 * in.amplitude * std::sqrt(eps);
    return {rho, SpectralField(g)};
  }
  if (in.preset == "random_band") {
    std::mt19937_64 rng(in.seed);
    const DecayKind d = decay_kind(in.decay);
    SpectralField f = random_band_field(g, BandSpec{in.kmax, in.amplitude, d, in.rate, true}, rng);
    SpectralField v = random_band_field(g, BandSpec{in.kmax, in.velocity_amplitude, d, in.rate, true}, rng);
    if (in.well_prepared) {
      for (int i = 0; i < g.n(Axis::parallel); ++i) f[g.flat(0, 0, i)] = 0.0;
      f[0] = 1.0;
      LimitState p = project_initial(f, v);
      return {p.rho, p.v};
    }
    f[0] = 1.0;
    return {f, v};
  }
  if (in.preset == "shear") {
    auto [rho, v] = shear_profiles(c);
    return {rho, v};
  }
  throw ConfigurationError("initial.preset: '" + in.preset + "' cannot seed the eps system");
}

LimitState limit_initial(const RunConfig& c) {
  const InitialSpec& in = c.initial;
  if (in.preset == "two_stream") return embed_two_phase(two_stream_state(c), c.grid[0]);
  if (in.preset == "shear") {
    auto [rho, v] = shear_profiles(c);
    return shear_flow(shear_potential(rho), v);
  }
  auto [rho, v] = eps_initial(c, c.epsilons.front());
  return project_initial(rho, v);
}

// -------------------------------------------------------------- recording

class Recorder {
 public:
  explicit Recorder(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }
  const fs::path& root() const { return root_; }

  fs::path file(const fs::path& rel) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    std::lock_guard lock(m_);
    files_.push_back(rel.generic_string());
    return p;
  }
  void check(std::string name, bool passed, std::string detail) {
    std::lock_guard lock(m_);
    checks_.push_back({std::move(name), passed, std::move(detail)});
  }
  std::vector<std::string> files() const {
    std::lock_guard lock(m_);
    auto f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }
  std::vector<CheckResult> checks() const {
    std::lock_guard lock(m_);
    return checks_;
  }

 private:
  fs::path root_;
  mutable std::mutex m_;
  std::vector<std::string> files_;
  std::vector<CheckResult> checks_;
};

void write_text(Recorder& rec, const fs::path& rel, const std::string& text) {
  std::ofstream out(rec.file(rel), std::ios::binary);
  out << text;
}

std::string gnuplot_script(const std::string& csv, const std::string& title, const std::string& xlabel,
                           const std::vector<std::pair<int, std::string>>& columns, bool logy = false) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set title '" << title << "'\n"
    << "set xlabel '" << xlabel << "'\n";
  if (logy) s << "set logscale y\n";
  s << "plot ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) s << ", \\\n     ";
    s << "'" << csv << "' using 1:" << columns[i].first << " with lines title '" << columns[i].second << "'";
  }
  s << "\npause -1\n";
  return s.str();
}

std::string tag(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix.c_str(), i);
  return buf;
}

void for_each_member(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(count, std::size_t(std::max(1, workers))));
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex m;
  std::size_t next = 0;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(m);
          if (next >= count || failure) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ------------------------------------------------------------ experiments

struct EpsMemberResult {
  EpsState initial;
  EpsState final;
  double energy_drift = 0.0;
  bool ok = false;
};

EpsMemberResult run_eps_member(const RunConfig& c, double eps, const fs::path& dir, Recorder& rec) {
  const EpsSolver solver(EpsConfig{eps, c.cfl, c.samples_per_period, c.admissibility_constant, c.norm.delta0});
  auto [rho0, v0] = eps_initial(c, eps);
  const std::string label = "eps=" + format_double(eps);
  EpsMemberResult res{solver.make_state_unchecked(rho0, v0), solver.make_state_unchecked(rho0, v0)};
  try {
    res.initial = solver.make_state(rho0, v0);
    rec.check("admissibility " + label, true, "parallel imbalance within C*sqrt(eps)");
  } catch (const DomainError& e) {
    rec.check("admissibility " + label, false, e.what());
  }

  CsvWriter csv(rec.file(dir / "diagnostics.csv"),
                {"t", "mass", "energy", "min_rho", "rho_norm", "v_norm", "sqrt_eps_E_norm", "rho_fluct_norm"});
  write_text(rec, dir / "diagnostics.gp",
             gnuplot_script("diagnostics.csv", "eps system, " + label, "t",
                            {{3, "energy"}, {5, "|rho|_delta"}, {6, "|v|_delta"}, {7, "|sqrt(eps) E|_delta"}}));
  const double e0 = solver.energy(res.initial);
  double mass_drift = 0.0, energy_drift = 0.0;
  long step = 0;
  auto observe = [&](const EpsState& s) {
    if (step % std::max(1, c.output_every) == 0) {
      const EpsDiagnostics d = solver.diagnostics(s, c.norm.delta);
      csv.row({d.t, d.mass, d.energy, d.min_rho, d.norm_rho, d.norm_v, d.norm_sqrt_eps_e, d.norm_rho_fluct});
      mass_drift = std::max(mass_drift, std::abs(d.mass - 1.0));
      energy_drift = std::max(energy_drift, std::abs(d.energy - e0) / std::max(std::abs(e0), 1e-300));
    }
    if (c.snapshot_every > 0 && step % c.snapshot_every == 0) {
      write_snapshot(rec.file(dir / (tag("rho_", std::size_t(step / c.snapshot_every)) + ".spec")),
                     Snapshot{s.rho, s.t, eps});
      write_snapshot(rec.file(dir / (tag("v_", std::size_t(step / c.snapshot_every)) + ".spec")),
                     Snapshot{s.v, s.t, eps});
    }
    ++step;
  };
  try {
    res.final = solver.integrate(res.initial, c.t_end, c.dt, observe);
    res.ok = true;
    rec.check("finite " + label, true, "reached t = " + format_double(res.final.t));
  } catch (const EpsBlowUpError& e) {
    res.final = e.last_valid();
    rec.check("finite " + label, false, e.what());
  }
  rec.check("mass " + label, mass_drift < 1e-12, "max |mass - 1| = " + format_double(mass_drift));
  rec.check("positivity " + label, !res.final.positivity_warning,
            res.final.positivity_warning ? "rho <= 0 was observed" : "rho > 0 throughout");
  res.energy_drift = energy_drift;
  rec.check("energy " + label, true, "max relative drift " + format_double(energy_drift));
  return res;
}

void eps_experiment(const RunConfig& c, const RunOptions& o, Recorder& rec, bool sweep) {
  std::vector<std::optional<EpsMemberResult>> results(c.epsilons.size());
  for_each_member(c.epsilons.size(), o.workers, [&](std::size_t i) {
    const fs::path dir = sweep ? fs::path(tag("eps_", i)) : fs::path();
    results[i] = run_eps_member(c, c.epsilons[i], dir, rec);
  });
  if (!sweep) return;

  // Limit solution from the projected data of the first member; ū = ∫ρv dx⊥
  // is sampled on its uniform steps to transport the correctors.
  const LimitSolver limit;
  const EpsState& s0 = results.front()->initial;
  LimitState l0 = project_initial(s0.rho, s0.v);
  FieldSeries ubar{l0.t, 0.0, {}};
  const LimitState lT = limit.integrate(l0, c.t_end, c.dt, [&](const LimitState& st) {
    if (ubar.samples.size() == 1) ubar.dt = st.t - ubar.t0;
    ubar.samples.push_back(perp_average(product(st.rho, st.v)));
  });
  CsvWriter csv(rec.file("convergence.csv"),
                {"epsilon", "rho_l2_error", "v_filtered_l2_error", "w_l2_error", "energy_rel_drift"});
  std::vector<double> rho_err;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = *results[i];
    const double eps = c.epsilons[i];
    const double er = l2_norm(r.final.rho - lT.rho);
    double ev = std::numeric_limits<double>::quiet_NaN();
    if (ubar.size() > 1) {
      const Correctors c0 = corrector_initial(r.initial);
      const FieldSeries plus = advect_correctors(c0.plus.samples.front(), ubar, ubar.dt);
      const FieldSeries minus = advect_correctors(c0.minus.samples.front(), ubar, ubar.dt);
      const SpectralField vc = corrector_velocity(plus.samples.back(), minus.samples.back(), r.final.t, eps);
      ev = l2_norm(r.final.v - broadcast(vc, r.final.v.grid()) - lT.v);
    }
    const double ew = l2_norm(r.final.filtered_velocity() - lT.v);
    rho_err.push_back(er);
    csv.row({eps, er, ev, ew, r.energy_drift});
  }
  write_text(rec, "convergence.gp",
             gnuplot_script("convergence.csv", "distance to the limit solution", "epsilon",
                            {{2, "rho"}, {3, "v - corrector"}, {4, "w"}}, true) );
  bool decreasing = true;
  for (std::size_t i = 1; i < rho_err.size(); ++i) decreasing = decreasing && rho_err[i] < rho_err[i - 1];
  rec.check("sweep convergence", decreasing, "rho error strictly decreasing along the sweep");
}

void limit_experiment(const RunConfig& c, Recorder& rec) {
  const LimitSolver solver;
  LimitState s = limit_initial(c);
  CsvWriter csv(rec.file("limit.csv"), {"t", "mass", "constraint_residual", "density_constraint", "rho_fluct_l2"});
  write_text(rec, "limit.gp",
             gnuplot_script("limit.csv", "limit system", "t", {{3, "d/dx_par int rho v"}, {5, "|rho - 1|"}}, true));
  double worst = 0.0;
  long step = 0;
  auto observe = [&](const LimitState& st) {
    const double res = constraint_residual(st.rho, st.v);
    worst = std::max(worst, res);
    if (step++ % std::max(1, c.output_every) == 0) {
      SpectralField f = st.rho;
      f[0] -= 1.0;
      csv.row({st.t, st.rho.mean().real(), res, density_constraint_residual(st.rho), l2_norm(f)});
    }
    if (c.snapshot_every > 0 && (step - 1) % c.snapshot_every == 0)
      write_snapshot(rec.file(tag("rho_", std::size_t((step - 1) / c.snapshot_every)) + ".spec"),
                     Snapshot{st.rho, st.t, 0.0});
  };
  try {
    s = solver.integrate(s, c.t_end, c.dt, observe);
    rec.check("finite", true, "reached t = " + format_double(s.t));
  } catch (const BlowUpError& e) {
    rec.check("finite", false, e.what());
  }
  rec.check("constraint", worst <= 1e-8, "max |d/dx_par int rho v| = " + format_double(worst));
}

void contraction_experiment(const RunConfig& c, Recorder& rec, json& extra) {
  const double eps = c.epsilons.front();
  const EpsSolver solver(EpsConfig{eps, c.cfl, c.samples_per_period, c.admissibility_constant, c.norm.delta0});
  auto [rho0, v0] = eps_initial(c, eps);
  const EpsState s0 = solver.make_state_unchecked(rho0, v0);
  CkConfig ck{eps, c.norm, c.samples_per_period, 8, c.max_iterations, 1e-10};
  if (c.bisect_eta) {
    ck.norm.eta = bisect_eta(ck, s0, c.eta_max);
    extra["chosen_eta"] = ck.norm.eta;
    if (ck.norm.eta <= 0.0) {
      rec.check("eta bisection", false, "no eta gives ratio <= 0.5");
      return;
    }
  }
  const CkScheme scheme(ck, s0);
  const auto result = scheme.run();
  CsvWriter csv(rec.file("contraction.csv"),
                {"n", "norm_rho_diff", "norm_w_diff", "norm_G_diff", "norm_E_diff", "ratio"});
  for (const auto& r : result.report.rows) csv.row({double(r.n), r.rho, r.w, r.G, r.E, r.ratio});
  write_text(rec, "contraction.gp",
             gnuplot_script("contraction.csv", "consecutive differences", "n",
                            {{2, "rho"}, {3, "w"}, {4, "G"}, {5, "sqrt(eps) E"}}, true));
  extra["eta"] = ck.norm.eta;
  extra["horizon"] = scheme.horizon();
  extra["converged"] = result.report.converged;
  extra["max_ratio"] = result.report.max_ratio;
  rec.check("contraction rate", result.report.half_rate,
            "max ratio for n >= 2 is " + format_double(result.report.max_ratio));
}

void growth_experiment_run(const RunConfig& c, Recorder& rec, json& extra) {
  GrowthConfig g;
  g.background = Background{c.initial.rho1, c.initial.stream, -c.initial.stream};
  g.npar = c.grid[2];
  g.seed = c.growth_seed;
  g.t_end = c.t_end;
  g.dt = c.dt.value_or(1e-3);
  g.harmonics = c.harmonics;
  const auto rows = growth_experiment(g, c.k_max);
  CsvWriter csv(rec.file("growth.csv"), {"k", "re_sigma_lin", "im_sigma_lin", "sigma_meas", "fit_r2"});
  bool within = true;
  for (const auto& r : rows) {
    csv.row({double(r.k), r.re_lin, r.im_lin, r.sigma_meas, r.r_squared});
    if (r.re_lin > 1e-9) within = within && std::abs(r.sigma_meas - r.re_lin) <= 0.1 * r.re_lin;
  }
  write_text(rec, "growth.gp",
             gnuplot_script("growth.csv", "growth rate against wavenumber", "k",
                            {{2, "linear theory"}, {4, "measured"}}));
  rec.check("growth matches linear theory", within, "|sigma_meas - Re sigma| <= 10%");

  const TwoPhaseState an = seeded_state(g.background, g.npar,
                                        BandSpec{g.npar / 3 - 1, 1.0, DecayKind::analytic, c.analytic_rate, true},
                                        c.seed_l2, c.initial.seed);
  const TwoPhaseState al = seeded_state(g.background, g.npar,
                                        BandSpec{g.npar / 3 - 1, 1.0, DecayKind::algebraic, c.algebraic_exponent, true},
                                        c.seed_l2, c.initial.seed);
  const auto da = time_to_doubling(an, g.background, c.t_end, g.dt);
  const auto dg = time_to_doubling(al, g.background, c.t_end, g.dt);
  extra["doubling_time_analytic"] = da.t_double;
  extra["doubling_time_algebraic"] = dg.t_double;
  rec.check("analytic seed outlives algebraic seed", da.t_double > dg.t_double,
            "doubling times " + format_double(da.t_double) + " vs " + format_double(dg.t_double));
}

void dichotomy_run(const RunConfig& c, const RunOptions& o, Recorder& rec, json& extra) {
  DichotomyConfig d = c.dichotomy;
  d.epsilons = c.epsilons;
  d.npar = c.grid[2];
  d.t_end = c.t_end;
  struct Pair {
    BranchResult stable, unstable;
  };
  std::vector<Pair> res(d.epsilons.size());
  for_each_member(d.epsilons.size(), o.workers, [&](std::size_t i) {
    const double eps = d.epsilons[i];
    for (int branch = 0; branch < 2; ++branch) {
      const BranchSetup setup = branch == 0 ? stable_branch(d, eps) : unstable_branch(d, eps);
      const std::string name = std::string(branch == 0 ? "stable_" : "unstable_") + tag("eps_", i) + ".csv";
      CsvWriter csv(rec.file(name), {"t", "energy", "relative_entropy", "mass_phase0", "mass_phase1"});
      long n = 0;
      const BranchResult r = run_branch(setup, d.t_end, [&](const MultiPhaseState& s) {
        if (n++ % std::max(1, c.output_every) != 0) return;
        const auto m = phase_masses(s);
        csv.row({s.t, toy_energy(s), relative_entropy(s, setup.reference), m[0], m.size() > 1 ? m[1] : 0.0});
      });
      (branch == 0 ? res[i].stable : res[i].unstable) = r;
    }
  });
  DichotomyReport rep;
  for (const auto& p : res) {
    rep.stable.push_back(p.stable);
    rep.unstable.push_back(p.unstable);
  }
  rep.stable_decreasing = rep.unstable_nondecreasing = res.size() >= 2;
  for (std::size_t i = 1; i < res.size(); ++i) {
    rep.stable_decreasing = rep.stable_decreasing && rep.stable[i].h_final < rep.stable[i - 1].h_final;
    rep.unstable_nondecreasing = rep.unstable_nondecreasing && rep.unstable[i].h_final >= rep.unstable[i - 1].h_final;
  }
  json report = json::array();
  for (std::size_t i = 0; i < res.size(); ++i)
    report.push_back({{"epsilon", d.epsilons[i]},
                      {"stable", {{"H0", rep.stable[i].h_initial}, {"HT", rep.stable[i].h_final},
                                  {"t_final", rep.stable[i].t_final}, {"blew_up", rep.stable[i].blew_up}}},
                      {"unstable", {{"H0", rep.unstable[i].h_initial}, {"HT", rep.unstable[i].h_final},
                                    {"t_final", rep.unstable[i].t_final}, {"blew_up", rep.unstable[i].blew_up}}}});
  write_text(rec, "dichotomy.json",
             json{{"branches", report},
                  {"stable_decreasing", rep.stable_decreasing},
                  {"unstable_nondecreasing", rep.unstable_nondecreasing}}
                     .dump(2));
  write_text(rec, "dichotomy.gp",
             gnuplot_script("stable_eps_00.csv", "relative entropy", "t", {{3, "H (stable, first epsilon)"}}, true));
  extra["stable_decreasing"] = rep.stable_decreasing;
  extra["unstable_nondecreasing"] = rep.unstable_nondecreasing;
  rec.check("stable branch decreasing", rep.stable_decreasing, "H(T) strictly decreasing along the sweep");
  rec.check("unstable branch non-decreasing", rep.unstable_nondecreasing, "H(T) non-decreasing along the sweep");
  double worst = 0.0;
  for (const auto& r : rep.stable) worst = std::max(worst, r.max_energy_increase);
  rec.check("toy energy non-increasing", worst <= 1e-8, "max relative step increase " + format_double(worst));
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << text;
    if (!out) throw ConfigurationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

// ------------------------------------------------------------- public API

std::string version_string() { return "driftfluid 0.1.0"; }

bool RunManifest::ok() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  c.source = doc.dump();
  Reader r(doc, "");
  r.get("experiment", c.experiment);
  r.get("grid", c.grid);
  r.get("epsilons", c.epsilons);
  r.get("t_end", c.t_end);
  r.get_optional("dt", c.dt);
  r.get("samples_per_period", c.samples_per_period);
  r.get("cfl", c.cfl);
  r.get("admissibility_constant", c.admissibility_constant);
  r.get("output_every", c.output_every);
  r.get("snapshot_every", c.snapshot_every);
  r.get("output_dir", c.output_dir);
  r.get("bisect_eta", c.bisect_eta);
  r.get("eta_max", c.eta_max);
  r.get("max_iterations", c.max_iterations);
  r.get("k_max", c.k_max);
  r.get("growth_seed", c.growth_seed);
  r.get("harmonics", c.harmonics);
  r.get("seed_l2", c.seed_l2);
  r.get("analytic_rate", c.analytic_rate);
  r.get("algebraic_exponent", c.algebraic_exponent);
  if (auto n = r.object("norm")) {
    n->get("delta0", c.norm.delta0);
    n->get("delta", c.norm.delta);
    n->get("eta", c.norm.eta);
    n->get("beta", c.norm.beta);
    n->finish();
  }
  if (auto in = r.object("initial")) {
    InitialSpec& s = c.initial;
    in->get("preset", s.preset);
    in->get("k_par", s.k_par);
    in->get("amplitude", s.amplitude);
    in->get("kmax", s.kmax);
    in->get("seed", s.seed);
    in->get("decay", s.decay);
    in->get("rate", s.rate);
    in->get("velocity_amplitude", s.velocity_amplitude);
    in->get("well_prepared", s.well_prepared);
    in->get("widths", s.widths);
    in->get("bump_amplitudes", s.bump_amplitudes);
    in->get("velocities", s.velocities);
    in->get("perturbation", s.perturbation);
    in->get("rho1", s.rho1);
    in->get("stream", s.stream);
    in->finish();
  }
  if (auto d = r.object("dichotomy")) {
    DichotomyConfig& s = c.dichotomy;
    d->get("density_contrast", s.density_contrast);
    d->get("drift_speed", s.drift_speed);
    d->get("well_prepared_amplitude", s.well_prepared_amplitude);
    d->get("stream_speed", s.stream_speed);
    d->get("perturbation", s.perturbation);
    d->finish();
  }
  r.finish();

  require(experiment_names().count(c.experiment), "experiment", "unknown experiment '" + c.experiment + "'");
  require(preset_names().count(c.initial.preset), "initial.preset", "unknown preset '" + c.initial.preset + "'");
  try {
    (void)config_grid(c);
  } catch (const std::exception& e) {
    throw ConfigurationError(std::string("grid: ") + e.what());
  }
  require(!c.epsilons.empty(), "epsilons", "at least one value needed");
  for (double e : c.epsilons) require(e > 0.0 && e <= 1.0, "epsilons", "values must lie in (0, 1]");
  require(c.t_end > 0.0, "t_end", "must be positive");
  require(!c.dt || *c.dt > 0.0, "dt", "must be positive");
  require(c.samples_per_period >= 1.0, "samples_per_period", "must be at least 1");
  require(c.cfl > 0.0, "cfl", "must be positive");
  require(c.admissibility_constant > 0.0, "admissibility_constant", "must be positive");
  require(c.output_every >= 1, "output_every", "must be at least 1");
  require(c.snapshot_every >= 0, "snapshot_every", "must be non-negative");
  require(c.max_iterations >= 1, "max_iterations", "must be at least 1");
  require(c.eta_max > 0.0, "eta_max", "must be positive");
  require(c.k_max >= 1, "k_max", "must be at least 1");
  require(c.harmonics >= 1, "harmonics", "must be at least 1");
  require(c.initial.widths.size() == c.initial.bump_amplitudes.size() &&
              c.initial.widths.size() == c.initial.velocities.size(),
          "initial.widths", "widths, bump_amplitudes and velocities must have equal length");
  require(c.initial.rho1 > 0.0 && c.initial.rho1 < 1.0, "initial.rho1", "must lie in (0, 1)");
  if (c.initial.preset == "random_band") decay_kind(c.initial.decay);
  try {
    c.norm.validate();
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(std::string("norm: ") + e.what());
  }
  if (c.experiment == "contraction")
    require(c.norm.time_limit() > 0.0, "norm", "empty time window");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Finding> validate(const RunConfig& c) {
  std::vector<Finding> out;
  const bool eps_kind = c.experiment == "eps_run" || c.experiment == "eps_sweep" || c.experiment == "contraction";
  if (eps_kind && c.initial.preset == "two_stream")
    out.push_back({"error", "preset two_stream only seeds limit_run"});
  if (eps_kind && c.initial.preset != "two_stream") {
    for (double eps : c.epsilons) {
      try {
        auto [rho, v] = eps_initial(c, eps);
        SpectralField bar = perp_average(dealias(rho));
        bar[0] -= 1.0;
        const double size = analytic_norm(bar, c.norm.delta0);
        const double bound = c.admissibility_constant * std::sqrt(eps);
        if (size > bound)
          out.push_back({"error", "eps=" + format_double(eps) + ": parallel charge imbalance " +
                                      format_double(size) + " exceeds C*sqrt(eps) = " + format_double(bound)});
        else
          out.push_back({"info", "eps=" + format_double(eps) + ": admissible (imbalance " + format_double(size) + ")"});
        if (c.dt) {
          const double limit = kTwoPi * std::sqrt(eps) / 40.0;
          if (*c.dt > limit)
            out.push_back({"warning", "eps=" + format_double(eps) + ": dt " + format_double(*c.dt) +
                                          " exceeds the oscillation bound 2*pi*sqrt(eps)/40 = " + format_double(limit)});
        }
        const auto vals = inverse(rho);
        if (*std::min_element(vals.begin(), vals.end()) <= 0.0)
          out.push_back({"error", "initial density is not positive"});
      } catch (const std::exception& e) {
        out.push_back({"error", e.what()});
      }
    }
  }
  if (c.experiment == "limit_run") {
    try {
      const LimitState s = limit_initial(c);
      out.push_back({"info", "limit data constraint residual " + format_double(constraint_residual(s.rho, s.v))});
    } catch (const std::exception& e) {
      out.push_back({"error", e.what()});
    }
  }
  if (c.experiment == "growth" && 3 * c.k_max >= c.grid[2])
    out.push_back({"error", "k_max lies beyond the dealiased band of the parallel grid"});
  if (c.experiment == "eps_sweep" && c.epsilons.size() < 2)
    out.push_back({"warning", "a sweep with a single epsilon has no trend to report"});
  if (out.empty()) out.push_back({"info", "configuration valid"});
  return out;
}

RunManifest run(const RunConfig& c, const RunOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  const ExecutionMode previous = execution_mode();
  RunOptions opts = o;
  if (opts.reference_mode) {
    set_execution_mode(ExecutionMode::reference);
    opts.workers = 1;
  }
  Recorder rec(opts.out.value_or(fs::path(c.output_dir)));
  RunManifest m;
  m.config = c.source.empty() ? "{}" : c.source;
  m.version = version_string();
  json extra = json::object();
  try {
    if (c.experiment == "eps_run")
      eps_experiment(c, opts, rec, false);
    else if (c.experiment == "eps_sweep")
      eps_experiment(c, opts, rec, true);
    else if (c.experiment == "limit_run")
      limit_experiment(c, rec);
    else if (c.experiment == "contraction")
      contraction_experiment(c, rec, extra);
    else if (c.experiment == "growth")
      growth_experiment_run(c, rec, extra);
    else if (c.experiment == "dichotomy")
      dichotomy_run(c, opts, rec, extra);
    else
      throw ConfigurationError("experiment: unknown '" + c.experiment + "'");
  } catch (const std::exception& e) {
    m.error = e.what();
  }
  set_execution_mode(previous);
  m.files = rec.files();
  m.checks = rec.checks();
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json checks = json::array();
  for (const auto& ch : m.checks) checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
  json files = m.files;
  files.push_back("manifest.json");
  json doc{{"config", json::parse(m.config)},
           {"version", m.version},
           {"wall_seconds", m.wall_seconds},
           {"execution_mode", opts.reference_mode ? "reference" : "parallel"},
           {"workers", opts.workers},
           {"files", files},
           {"checks", checks},
           {"results", extra},
           {"status", m.ok() ? "ok" : "failed"}};
  if (!m.error.empty()) doc["error"] = m.error;
  write_atomic(rec.root() / "manifest.json", doc.dump(2) + "\n");
  m.files.push_back("manifest.json");
  return m;
}

std::vector<PresetInfo> list_presets() {
  return {{"equilibrium", "rho = 1, v = 0"},
          {"single_mode", "rho = 1 + amplitude sqrt(eps) cos(2 pi k_par x_par), v = 0"},
          {"shear", "bumps in x1 (widths, bump_amplitudes) moving with velocities, no x2 dependence"},
          {"two_stream", "two phases rho1, 1 - rho1 streaming at +stream and -stream (limit runs)"},
          {"random_band", "random band-limited data (kmax, amplitude, seed, decay analytic|algebraic|flat, rate)"}};
}

std::vector<PresetInfo> list_experiments() {
  return {{"eps_run", "one eps-system run with diagnostics"},
          {"eps_sweep", "eps-system runs over the epsilon list plus the distance to the limit run"},
          {"limit_run", "limit system run with constraint monitoring"},
          {"contraction", "Cauchy-Kovalevskaya iteration table, optional eta bisection"},
          {"growth", "two-stream growth rates and analytic vs algebraic seed comparison"},
          {"dichotomy", "toy model relative entropy for stable and unstable branches"}};
}

}  // namespace driftfluid
