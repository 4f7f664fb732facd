#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "multicmh/dataset.hpp"

namespace multicmh {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Comma-separated, header row required, UTF-8, '.' decimal. Throws
/// InputError naming the row and column on any non-numeric or non-finite
/// cell, and on ragged rows.
CsvTable read_csv(std::istream& in, const std::string& name = "<stream>");
CsvTable read_csv_file(const std::string& path);

}  // namespace multicmh
