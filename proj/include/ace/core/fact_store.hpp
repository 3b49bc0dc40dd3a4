#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ace/core/term.hpp"
#include "ace/core/unify.hpp"

namespace ace::core {

struct TableRow {
  std::string label;
  std::vector<double> values;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

/// Rows of labeled numbers. `columns[0]` names the label column, the rest
/// name the numeric columns; every row has `columns.size() - 1` values.
struct NumericTable {
  std::vector<std::string> columns;
  std::vector<TableRow> rows;

  std::optional<std::size_t> value_index(std::string_view column) const;
  const TableRow* find_row(std::string_view label) const;
  /// Value at (row label, column); nullopt when either is missing.
  std::optional<double> value(std::string_view label, std::string_view column) const;
  void validate() const;

  friend bool operator==(const NumericTable&, const NumericTable&) = default;
};

struct FactMatch {
  Atom fact;
  Substitution bindings;
};

/// Bag of ground atoms grouped into relations by predicate name, plus
/// named numeric tables. Duplicate facts accumulate.
///
/// Single writer per store; concurrent sessions use separate stores.
class FactStore {
 public:
  /// Returns the new revision. Throws when `fact` has a variable.
  std::uint64_t assert_fact(Atom fact);
  /// Removes every fact unifying with `pattern`; returns the count.
  std::size_t retract(const Atom& pattern);
  /// Every stored fact unifying with `pattern`, in insertion order.
  std::vector<FactMatch> match(const Atom& pattern) const;

  const std::vector<Atom>& relation(const std::string& name) const;
  std::vector<std::string> relation_names() const;
  std::size_t fact_count() const;

  void put_table(std::string name, NumericTable table);
  const NumericTable* table(std::string_view name) const;
  std::vector<std::string> table_names() const;

  /// Appends facts and tables of `other`; tables with the same name are replaced.
  void merge(const FactStore& other);

  std::uint64_t revision() const { return revision_; }
  bool empty() const { return relations_.empty() && tables_.empty(); }

  friend bool operator==(const FactStore& a, const FactStore& b) {
    return a.relations_ == b.relations_ && a.tables_ == b.tables_;
  }

 private:
  std::vector<std::pair<std::string, std::vector<Atom>>> relations_;
  std::vector<std::pair<std::string, NumericTable>> tables_;
  std::uint64_t revision_ = 0;
};

/// Text format: one ground atom per line (`name(a, b).`), numeric tables as
/// CSV blocks opened by `table <name>:` and closed by a blank line, `#`
/// comments.
FactStore parse_store(std::string_view text, const std::string& file_name = "<input>");
std::string serialize_store(const FactStore& store);

FactStore load_store(const std::filesystem::path& path);
void save_store(const FactStore& store, const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ace::core
