#ifndef FASTIDS_SRC_CSV_IO_HPP
#define FASTIDS_SRC_CSV_IO_HPP

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "fastids/core.hpp"

namespace fastids::detail {

/// precision <= 0 writes the shortest representation that round-trips.
inline void write_number(std::ostream& out, double value, int precision) {
  char buf[64];
  const auto res = precision > 0
                       ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general,
                                       precision)
                       : std::to_chars(buf, buf + sizeof buf, value);
  out.write(buf, res.ptr - buf);
}

inline double parse_number(const std::string& token) {
  std::size_t begin = token.find_first_not_of(" \t\r");
  std::size_t end = token.find_last_not_of(" \t\r");
  if (begin == std::string::npos) throw InputError("empty numeric field");
  const char* first = token.data() + begin;
  const char* last = token.data() + end + 1;
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InputError("not a number: '" + token + "'");
  }
  return value;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

/// Reads every non-blank line as a row of comma-separated numbers.
inline std::vector<std::vector<double>> read_numeric_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    std::vector<double> row;
    for (const auto& field : split(line, ',')) row.push_back(parse_number(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fastids::detail

#endif  // FASTIDS_SRC_CSV_IO_HPP
