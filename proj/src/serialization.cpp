#include "driftfluid/serialization.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "driftfluid/errors.hpp"

namespace driftfluid {
namespace {

constexpr const char* kFormat = "driftfluid-spec";

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  if (!is) throw ConfigurationError(".spec payload truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& s) {
  const Grid& g = s.field.grid();
  nlohmann::json h;
  h["format"] = kFormat;
  h["version"] = 1;
  h["dims"] = g.dims();
  h["axes"] = {"perp1", "perp2", "parallel"};
  h["collocation"] = {!g.is_dealiased(Axis::perp1), !g.is_dealiased(Axis::perp2),
                      !g.is_dealiased(Axis::parallel)};
  h["real"] = s.field.is_real();
  h["time"] = s.time;
  h["epsilon"] = s.epsilon;
  h["count"] = s.field.size();
  os << h.dump() << '\n';
  for (const cplx& c : s.field.coeffs()) {
    put_f64(os, c.real());
    put_f64(os, c.imag());
  }
}

Snapshot read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigurationError(".spec header missing");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string(".spec header is not JSON: ") + e.what());
  }
  if (h.value("format", "") != kFormat) throw ConfigurationError(".spec header: unknown format");
  if (h.value("version", 0) != 1) throw ConfigurationError(".spec header: unsupported version");
  const auto dims = h.at("dims").get<std::array<int, 3>>();
  Grid g(dims[0], dims[1], dims[2]);
  const auto coll = h.value("collocation", std::array<bool, 3>{false, false, false});
  for (int a = 0; a < 3; ++a)
    if (coll[a]) g = g.with_collocation_axis(static_cast<Axis>(a));
  const auto count = h.at("count").get<std::size_t>();
  if (count != g.size()) throw ConfigurationError(".spec header: count does not match dims");
  std::vector<cplx> c(count);
  for (auto& v : c) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    v = cplx(re, im);
  }
  return Snapshot{SpectralField(g, std::move(c), h.at("real").get<bool>()),
                  h.at("time").get<double>(), h.at("epsilon").get<double>()};
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigurationError("cannot open " + path.string() + " for writing");
  write_snapshot(os, s);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigurationError("cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace driftfluid
