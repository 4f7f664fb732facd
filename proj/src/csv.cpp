#include "multicmh/csv.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace multicmh {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& name) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw InputError(name + ": empty input, header required");
  for (const auto& h : split_line(line)) table.header.push_back(trim(h));
  if (table.header.empty()) throw InputError(name + ": header row has no columns");

  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size())
      throw InputError(name + ": row " + std::to_string(row_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(table.header.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = trim(cells[j]);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw InputError(name + ": non-numeric or non-finite value '" + cell +
                         "' in column '" + table.header[j] + "' at row " +
                         std::to_string(row_no));
      row[j] = v;
    }
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw InputError(name + ": no data rows");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return read_csv(in, path);
}

}  // namespace multicmh
