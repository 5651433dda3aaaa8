#pragma once

// Comma-separated numeric tables shared by the permittivity and occupation
// loaders: one sample per line, '#' starts a comment, blank lines ignored.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gapkgf/error.hpp"

namespace gapkgf::detail {

struct NumericRow {
  int line = 0;
  std::vector<double> values;
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline std::vector<NumericRow> parse_numeric_rows(std::istream& in, std::size_t columns, std::string_view source) {
  std::vector<NumericRow> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    NumericRow row{number, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      const auto field = view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      double value = 0;
      if (!parse_double(field, value)) {
        throw Error(ErrorCode::ParseError,
                    std::string(source) + ":" + std::to_string(number) + ": malformed number '" + std::string(trim(field)) + "'");
      }
      row.values.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.values.size() != columns) {
      throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(number) + ": expected " +
                                             std::to_string(columns) + " columns, found " +
                                             std::to_string(row.values.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, std::string(source) + ": no data rows");
  return rows;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

// Number of comma-separated columns on the first data line; 0 if none.
inline std::size_t sniff_columns(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    std::size_t n = 1;
    for (char c : view) n += (c == ',');
    return n;
  }
  return 0;
}

}  // namespace gapkgf::detail
