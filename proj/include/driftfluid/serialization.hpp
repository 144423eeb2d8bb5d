#pragma once

#include <filesystem>
#include <iosfwd>

#include "driftfluid/spectral_field.hpp"

namespace driftfluid {

/// `.spec` snapshot: one line of JSON header terminated by '\n', followed by
/// the coefficients as little-endian float64 pairs (re, im) in FFT index order
/// (parallel index fastest).
///
/// Header keys: format ("driftfluid-spec"), version (1), dims [n1, n2, npar],
/// axes ["perp1", "perp2", "parallel"], collocation [bool x3], real, time,
/// epsilon, count (number of complex coefficients).
struct Snapshot {
  SpectralField field;
  double time = 0.0;
  double epsilon = 0.0;
};

void write_snapshot(std::ostream& os, const Snapshot& s);
Snapshot read_snapshot(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace driftfluid
