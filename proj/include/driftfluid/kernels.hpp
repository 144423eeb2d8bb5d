#pragma once

// Mode-wise and point-wise loops used by every spectral operation.
//
// Each kernel has a serial reference form and an OpenMP form. The active form
// is chosen by the process-wide execution mode. Reference mode is the serial
// path and is bitwise deterministic; tests and `--reference-mode` runs use it.

#include <complex>
#include <cstddef>
#include <span>
#include <utility>

#include <omp.h>

namespace driftfluid {

using cplx = std::complex<double>;

enum class ExecutionMode { reference, parallel };

void set_execution_mode(ExecutionMode m);
ExecutionMode execution_mode();

namespace kernels {

namespace serial {

template <class F>
void for_each(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
double sum(std::size_t n, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += f(i);
  return acc;
}

template <class F>
double max(std::size_t n, F&& f, double init) {
  double m = init;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f(i);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace serial

namespace parallel {

template <class F>
void for_each(std::size_t n, F&& f) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) f(static_cast<std::size_t>(i));
}

template <class F>
double sum(std::size_t n, F&& f) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (std::ptrdiff_t i = 0; i < count; ++i) acc += f(static_cast<std::size_t>(i));
  return acc;
}

template <class F>
double max(std::size_t n, F&& f, double init) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  double m = init;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double v = f(static_cast<std::size_t>(i));
    if (v > m) m = v;
  }
  return m;
}

}  // namespace parallel

// Small problems stay serial: thread start-up dominates below this size.
inline constexpr std::size_t kParallelThreshold = 4096;

template <class F>
void for_each(std::size_t n, F&& f) {
  if (execution_mode() == ExecutionMode::parallel && n >= kParallelThreshold)
    parallel::for_each(n, std::forward<F>(f));
  else
    serial::for_each(n, std::forward<F>(f));
}

template <class F>
double sum(std::size_t n, F&& f) {
  if (execution_mode() == ExecutionMode::parallel && n >= kParallelThreshold)
    return parallel::sum(n, std::forward<F>(f));
  return serial::sum(n, std::forward<F>(f));
}

template <class F>
double max(std::size_t n, F&& f, double init) {
  if (execution_mode() == ExecutionMode::parallel && n >= kParallelThreshold)
    return parallel::max(n, std::forward<F>(f), init);
  return serial::max(n, std::forward<F>(f), init);
}

/// out[i] = a[i] * b[i]
void multiply(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);
/// out[i] = Re(a[i] * b[i]); the imaginary residue of real-valued products is dropped.
void multiply_real(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);

}  // namespace kernels
}  // namespace driftfluid
