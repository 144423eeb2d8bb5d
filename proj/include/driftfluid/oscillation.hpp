#pragma once

#include <optional>
#include <vector>

#include "driftfluid/eps_solver.hpp"
#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// Uniformly sampled time series of fields sharing one grid.
struct FieldSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<SpectralField> samples;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t j) const { return t0 + dt * static_cast<double>(j); }
  double t_end() const { return time(samples.size() - 1); }
  /// Cubic Lagrange interpolation between samples (four-point stencil).
  SpectralField at(double t) const;
};

/// ∫ρv dx⊥, the parallel current.
SpectralField parallel_current(const EpsState& s);

/// Source of the plasma wave equation ε∂t²∂∥E + ∂∥E = g:
///   g = ∂∥²∫ρv² dx⊥ - ε∂∥(E∥∂∥E∥) + ∂∥∫ρ ε∂∥φ dx⊥.
SpectralField wave_source(const EpsState& s);

/// Data fixing the homogeneous part of the Duhamel formulas.
struct WaveInitialData {
  SpectralField e_par;         ///< E∥(0)
  SpectralField eps_dt_e_par;  ///< ε∂tE∥(0)
};

/// E∥(0) from the state and ε∂tE∥(0) = -(J(0) - mean J(0)) from the continuity equation.
WaveInitialData wave_initial_data(const EpsState& s0);

/// G(t) = ∫₀ᵗ E∥ from the Duhamel formula, mode by mode,
///   Ĝ(t) = √εÊ₀ sin(t/√ε) - εÊ'₀ (cos(t/√ε) - 1) + ∫₀ᵗ (1 - cos((t-s)/√ε)) ĝ(s)/(i2πk) ds.
/// Times are measured from source.t0. Throws InvariantViolation when the
/// source has a nonzero mean.
FieldSeries duhamel_G(const FieldSeries& source, double epsilon, const WaveInitialData& init);

/// √εE∥(t) = √εÊ₀ cos(t/√ε) + εÊ'₀ sin(t/√ε) + ∫₀ᵗ sin((t-s)/√ε) ĝ(s)/(i2πk) ds.
FieldSeries duhamel_E(const FieldSeries& source, double epsilon, const WaveInitialData& init);

/// Split E∥ = E¹ + E² with E² the forward average over one period 2π√ε and
/// W = W(0) + ∫E¹. Fields are returned for every sample with t + 2π√ε <= T.
struct Decomposition {
  FieldSeries e1;
  FieldSeries e2;
  FieldSeries W;
};

/// Throws DomainError when the series is shorter than one period.
Decomposition decompose(const FieldSeries& e_par, double epsilon, const SpectralField& W0);

/// Envelopes E± with √εE¹ ≈ E₊e^{it/√ε} + E₋e^{-it/√ε}.
struct Correctors {
  FieldSeries plus;
  FieldSeries minus;
};

/// Demodulation over a centred window of `periods` periods (integer, >= 2):
///   E±(t) = mean over |s - t| <= L/2 of e^{∓is/√ε} √εE¹(s).
/// Defined on samples whose window lies inside the series.
Correctors extract_correctors(const FieldSeries& sqrt_eps_e1, double epsilon, int periods = 4);

/// E±(0) = ½(√εE∥(0) ± i(J(0) - mean J(0))).
Correctors corrector_initial(const EpsState& s0);

/// Transports a complex parallel field by ∂tE + ū∂∥E = 0 with RK4 steps of
/// size dt, where dt must divide the sample spacing of ū. Returns E at the
/// sample times of ū.
FieldSeries advect_correctors(const SpectralField& e0, const FieldSeries& ubar, double dt);

/// L² distance between x(t) and E₊(t)e^{it/√ε} + E₋(t)e^{-it/√ε} at time t.
double corrector_residual(const SpectralField& x, const SpectralField& plus,
                          const SpectralField& minus, double t, double epsilon);

/// Oscillating velocity carried by the correctors, (1/i)(E₊e^{it/√ε} - E₋e^{-it/√ε});
/// v_ε minus this converges to the limit velocity.
SpectralField corrector_velocity(const SpectralField& plus, const SpectralField& minus, double t,
                                 double epsilon);

/// Everything recorded along an eps_solver run at the step times.
struct EpsRecording {
  FieldSeries e_par;    ///< E∥
  FieldSeries source;   ///< wave source g
  FieldSeries current;  ///< J = ∫ρv dx⊥
  FieldSeries G;        ///< G integrated along with the state
  std::vector<double> energy;
  EpsState initial;
  EpsState final;
};

EpsRecording record_eps_run(const EpsSolver& solver, const EpsState& s0, double t_end,
                            std::optional<double> dt = std::nullopt);

struct SpectrumPeak {
  double omega;      ///< angular frequency of the strongest nonzero bin
  double bin_width;  ///< 2π / (N dt)
};

/// Peak of the discrete Fourier transform of a sampled scalar signal; the mean is removed first.
SpectrumPeak dominant_angular_frequency(std::span<const double> signal, double dt);

}  // namespace driftfluid
