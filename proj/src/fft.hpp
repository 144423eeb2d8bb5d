#pragma once

#include <span>

#include "driftfluid/grid.hpp"
#include "driftfluid/kernels.hpp"

namespace driftfluid::detail {

// In-place unnormalized complex transforms with cached FFTW plans.
// sign = -1 is the forward kernel e^{-i2πk·x}.
void fft_inplace(const Grid& grid, std::span<cplx> data, int sign);

}  // namespace driftfluid::detail
