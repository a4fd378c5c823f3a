#include "coopdyn/harness/csv.hpp"

#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace coopdyn::harness {

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // folds -0
  return fmt::format("{:#.12g}", x);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << h;
    first = false;
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (pending_ == columns_) throw std::logic_error("csv " + path_.string() + ": too many cells in row");
  if (pending_ > 0) out_ << ',';
  out_ << text;
  ++pending_;
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_) throw std::logic_error("csv " + path_.string() + ": short row");
  out_ << '\n';
  pending_ = 0;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (std::getline(in, line)) t.header = split(line);
  while (std::getline(in, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

}  // namespace coopdyn::harness
