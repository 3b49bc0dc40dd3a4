#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ace::core {

/// Comma-separated rows. Double quotes protect commas and `""` escapes a
/// quote; unquoted cells are trimmed. Blank lines and lines starting
/// with `#` are skipped.
struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

std::vector<CsvRow> parse_csv(std::string_view text);

/// Whole-cell decimal number; throws ParseError naming the line otherwise.
double parse_cell_number(const std::string& cell, std::size_t line);

}  // namespace ace::core
