#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace driftfluid {

/// RFC-4180 CSV writer; numbers are written with 17 significant digits so
/// output is reproducible bit for bit.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

std::string csv_escape(const std::string& cell);
std::string format_double(double x);

}  // namespace driftfluid
