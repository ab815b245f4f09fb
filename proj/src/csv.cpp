#include "rbig/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <string_view>

#include "rbig/errors.hpp"

namespace rbig {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> to_double(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<double> values;
  std::size_t cols = 0;
  long rows = 0;
  long line_no = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      bool numeric = true;
      for (auto c : cells) numeric = numeric && to_double(c).has_value();
      if (!numeric) {
        for (auto c : cells) table.header.emplace_back(c);
        cols = cells.size();
        continue;
      }
      cols = cells.size();
    }
    if (cells.size() != cols)
      throw ParseError("row " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                           " columns, found " + std::to_string(cells.size()),
                       line_no, 0);
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const auto v = to_double(cells[j]);
      if (!v || !std::isfinite(*v))
        throw ParseError("row " + std::to_string(line_no) + ", column " + std::to_string(j + 1) +
                             ": not a finite number: '" + std::string(cells[j]) + "'",
                         line_no, static_cast<long>(j + 1));
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows");
  table.data.resize(rows, static_cast<Eigen::Index>(cols));
  for (long r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.data(r, static_cast<Eigen::Index>(c)) = values[static_cast<std::size_t>(r) * cols + c];
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const DataMatrix& data, const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data(r, c);
    out << '\n';
  }
}

void write_csv_file(const std::string& path, const DataMatrix& data, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, data, header);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace rbig
