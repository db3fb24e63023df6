#pragma once

#include "scenvi/core/types.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace scenvi::csv {

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<int> line;  // 1-based source line of each row
};

inline double parse_real(std::string s, int line, const std::string& source) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(source + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

inline bool looks_numeric(const std::string& cell) {
  const auto b = cell.find_first_not_of(" \t");
  if (b == std::string::npos) return false;
  const char c = cell[b];
  return (c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.';
}

/// Numeric CSV. Blank lines and '#' comments are skipped, as is a header line
/// (first non-comment line whose first cell does not start like a number).
inline Table read(std::istream& in, const std::string& source = "<csv>") {
  Table t;
  std::string text;
  int line = 0;
  bool first = true;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    const auto b = text.find_first_not_of(" \t");
    if (b == std::string::npos || text[b] == '#') continue;
    if (first && !looks_numeric(text.substr(0, text.find(',')))) {
      first = false;
      continue;
    }
    first = false;
    if (text.back() == ',') throw ParseError(source + ":" + std::to_string(line) + ": trailing comma");
    std::vector<double> row;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_real(cell, line, source));
    t.rows.push_back(std::move(row));
    t.line.push_back(line);
  }
  return t;
}

inline Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read(in, path);
}

/// Shortest text that parses back to the same double.
inline std::string format(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_row(std::ostream& out, const Vector& v) {
  for (Index j = 0; j < v.size(); ++j) {
    if (j) out << ',';
    out << format(v[j]);
  }
  out << '\n';
}

} // namespace scenvi::csv
