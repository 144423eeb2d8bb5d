// Serial reference vs OpenMP kernels on the hot spectral paths.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "driftfluid/field_solvers.hpp"
#include "driftfluid/kernels.hpp"
#include "driftfluid/spectral_field.hpp"

namespace df = driftfluid;

namespace {

df::SpectralField sample_field(const df::Grid& g, double phase) {
  std::vector<double> v(g.size());
  const auto& d = g.dims();
  for (int i = 0; i < d[0]; ++i)
    for (int j = 0; j < d[1]; ++j)
      for (int l = 0; l < d[2]; ++l) {
        const double x = double(i) / d[0], y = double(j) / d[1], z = double(l) / d[2];
        v[g.flat(i, j, l)] = 1.0 + 0.1 * std::sin(2 * M_PI * (x + phase)) * std::cos(2 * M_PI * (y + 2 * z));
      }
  return df::forward(g, v);
}

df::ExecutionMode mode_of(const benchmark::State& st) {
  return st.range(1) == 0 ? df::ExecutionMode::reference : df::ExecutionMode::parallel;
}

void BM_product(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  df::set_execution_mode(mode_of(st));
  const df::Grid g(n, n, n);
  const auto a = sample_field(g, 0.1), b = sample_field(g, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(df::product(a, b));
  st.SetLabel(st.range(1) == 0 ? "reference" : "parallel");
}

void BM_derivative(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  df::set_execution_mode(mode_of(st));
  const df::Grid g(n, n, n);
  const auto a = sample_field(g, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(df::derivative(a, df::Axis::parallel));
  st.SetLabel(st.range(1) == 0 ? "reference" : "parallel");
}

void BM_solve_phi(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  df::set_execution_mode(mode_of(st));
  const df::Grid g(n, n, n);
  const auto rho = sample_field(g, 0.4);
  for (auto _ : st) benchmark::DoNotOptimize(df::solve_phi(rho, 0.1));
  st.SetLabel(st.range(1) == 0 ? "reference" : "parallel");
}

void args(benchmark::internal::Benchmark* b) {
  for (int n : {16, 32, 64})
    for (int m : {0, 1}) b->Args({n, m});
}

}  // namespace

BENCHMARK(BM_product)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_derivative)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_solve_phi)->Apply(args)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
