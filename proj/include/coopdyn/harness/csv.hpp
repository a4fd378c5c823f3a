#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace coopdyn::harness {

/// Twelve significant digits, trailing zeros kept, "." decimal point; -0 prints as 0.
std::string format_real(double x);

/// Comma-delimited file with a header row. Cells are written verbatim.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double x) { return cell(format_real(x)); }
  CsvWriter& cell(long long x) { return cell(std::to_string(x)); }
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(bool x) { return cell(std::string_view(x ? "1" : "0")); }
  void end_row();

  std::size_t columns() const { return columns_; }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
  std::size_t pending_ = 0;
};

/// Header and rows of a CSV file, split on commas (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace coopdyn::harness
