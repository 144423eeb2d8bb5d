#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace driftfluid::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution with new arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(const std::array<int, 3>& dims) {
  static std::map<std::array<int, 3>, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(dims);
  if (it != cache.end()) return it->second;

  std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.forward = fftw_plan_dft(3, dims.data(), buf, buf, FFTW_FORWARD, flags);
  p.backward = fftw_plan_dft(3, dims.data(), buf, buf, FFTW_BACKWARD, flags);
  return cache.emplace(dims, p).first->second;
}

}  // namespace

void fft_inplace(const Grid& grid, std::span<cplx> data, int sign) {
  const PlanPair& p = plans_for(grid.dims());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(sign < 0 ? p.forward : p.backward, buf, buf);
}

}  // namespace driftfluid::detail
