#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "adacurv/error.hpp"

namespace adacurv {

/// Shortest decimal string that parses back to exactly the same double.
/// NaN becomes the empty cell, the convention for "no value" in every file
/// this library writes.
inline std::string format_double(double value) {
  if (std::isnan(value)) return std::string();
  char buf[32];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Parse a full cell as a double. Returns false on an empty or malformed
/// cell; out is untouched in that case.
inline bool parse_double(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  double value = 0.0;
  const std::from_chars_result res =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) return false;
  out = value;
  return true;
}

/// A parsed CSV file: leading '#' comment lines, one header row, data rows.
/// Cells keep their original text so a pass-through rewrite is byte-exact.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_lines;  // 1-based source line of each row, for errors

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    fail(Errc::FormatError, "missing column: " + name);
  }
};

namespace detail {

inline std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace detail

/// Read a comma-separated table. '#' lines before the header are collected as
/// comments; after the header they are an error. Every data row must have as
/// many cells as the header. Errors carry 1-based line numbers.
inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header)
        fail(Errc::FormatError,
             "line " + std::to_string(line_no) + ": comment after the header");
      table.comments.push_back(line.substr(1));
      continue;
    }
    std::vector<std::string> cells = detail::split_cells(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      fail(Errc::FormatError, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.header.size()) + " cells, found " +
                                  std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
    table.row_lines.push_back(line_no);
  }
  if (!have_header) fail(Errc::FormatError, "no header row");
  return table;
}

}  // namespace adacurv
