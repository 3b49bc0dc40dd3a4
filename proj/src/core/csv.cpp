#include "ace/core/csv.hpp"

#include <charconv>
#include <cmath>

#include "ace/core/error.hpp"

namespace ace::core {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    auto t = trim(line);
    if (t.empty() || t[0] == '#') {
      if (end == text.size()) break;
      continue;
    }
    CsvRow row{line_no, {}};
    std::string cell;
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = was_quoted = true;
        cell = trim(cell);
      } else if (c == ',') {
        row.cells.push_back(was_quoted ? cell : trim(cell));
        cell.clear();
        was_quoted = false;
      } else {
        cell += c;
      }
    }
    if (quoted) throw ParseError("unterminated quoted cell", line_no);
    row.cells.push_back(was_quoted ? cell : trim(cell));
    rows.push_back(std::move(row));
    if (end == text.size()) break;
  }
  return rows;
}

double parse_cell_number(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || p != last || !std::isfinite(v))
    throw ParseError("'" + cell + "' is not a number", line);
  return v;
}

}  // namespace ace::core
