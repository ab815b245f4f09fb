#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "rbig/types.hpp"

namespace rbig {

/// Numeric CSV: comma-separated, rows are samples. A first line that does
/// not parse as numbers is taken as a header. Missing or non-numeric cells
/// raise ParseError with 1-based row (file line) and column.
struct CsvTable {
  std::vector<std::string> header;  ///< empty when the file has none
  DataMatrix data;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes values with 17 significant digits.
void write_csv(std::ostream& out, const DataMatrix& data, const std::vector<std::string>& header = {});
void write_csv_file(const std::string& path, const DataMatrix& data,
                    const std::vector<std::string>& header = {});

}  // namespace rbig
