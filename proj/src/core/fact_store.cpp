#include "ace/core/fact_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ace/core/error.hpp"
#include "ace/lang/parser.hpp"

namespace ace::core {

std::optional<std::size_t> NumericTable::value_index(std::string_view column) const {
  for (std::size_t i = 1; i < columns.size(); ++i)
    if (columns[i] == column) return i - 1;
  return std::nullopt;
}

const TableRow* NumericTable::find_row(std::string_view label) const {
  for (const auto& r : rows)
    if (r.label == label) return &r;
  return nullptr;
}

std::optional<double> NumericTable::value(std::string_view label, std::string_view column) const {
  auto idx = value_index(column);
  const TableRow* row = find_row(label);
  if (!idx || !row) return std::nullopt;
  return row->values[*idx];
}

void NumericTable::validate() const {
  if (columns.empty()) throw Error("table needs a header row");
  for (const auto& r : rows)
    if (r.values.size() + 1 != columns.size())
      throw Error("table row '" + r.label + "' has " + std::to_string(r.values.size()) + " values, expected " +
                  std::to_string(columns.size() - 1));
}

namespace {

std::string first_variable(const Atom& a) {
  std::vector<std::string> vars;
  for (const auto& t : a.args) t.collect_variables(vars);
  return vars.empty() ? std::string() : vars.front();
}

const std::vector<Atom>& no_facts() {
  static const std::vector<Atom> empty;
  return empty;
}

}  // namespace

std::uint64_t FactStore::assert_fact(Atom fact) {
  if (!fact.is_ground()) throw Error("unbound variable " + first_variable(fact) + " in fact " + to_string(fact));
  auto it = std::find_if(relations_.begin(), relations_.end(), [&](const auto& r) { return r.first == fact.predicate; });
  if (it == relations_.end()) {
    relations_.emplace_back(fact.predicate, std::vector<Atom>{});
    it = std::prev(relations_.end());
  }
  it->second.push_back(std::move(fact));
  return ++revision_;
}

std::size_t FactStore::retract(const Atom& pattern) {
  auto it = std::find_if(relations_.begin(), relations_.end(), [&](const auto& r) { return r.first == pattern.predicate; });
  if (it == relations_.end()) return 0;
  auto& facts = it->second;
  auto before = facts.size();
  facts.erase(std::remove_if(facts.begin(), facts.end(), [&](const Atom& f) { return unify(pattern, f).has_value(); }),
              facts.end());
  std::size_t removed = before - facts.size();
  if (facts.empty()) relations_.erase(it);
  if (removed) ++revision_;
  return removed;
}

std::vector<FactMatch> FactStore::match(const Atom& pattern) const {
  std::vector<FactMatch> out;
  for (const auto& f : relation(pattern.predicate)) {
    if (auto s = unify(pattern, f)) out.push_back({f, std::move(*s)});
  }
  return out;
}

const std::vector<Atom>& FactStore::relation(const std::string& name) const {
  for (const auto& [n, facts] : relations_)
    if (n == name) return facts;
  return no_facts();
}

std::vector<std::string> FactStore::relation_names() const {
  std::vector<std::string> out;
  for (const auto& r : relations_) out.push_back(r.first);
  return out;
}

std::size_t FactStore::fact_count() const {
  std::size_t n = 0;
  for (const auto& r : relations_) n += r.second.size();
  return n;
}

void FactStore::put_table(std::string name, NumericTable table) {
  table.validate();
  for (auto& [n, t] : tables_) {
    if (n == name) {
      t = std::move(table);
      ++revision_;
      return;
    }
  }
  tables_.emplace_back(std::move(name), std::move(table));
  ++revision_;
}

const NumericTable* FactStore::table(std::string_view name) const {
  for (const auto& [n, t] : tables_)
    if (n == name) return &t;
  return nullptr;
}

std::vector<std::string> FactStore::table_names() const {
  std::vector<std::string> out;
  for (const auto& t : tables_) out.push_back(t.first);
  return out;
}

void FactStore::merge(const FactStore& other) {
  for (const auto& [_, facts] : other.relations_)
    for (const auto& f : facts) assert_fact(f);
  for (const auto& [name, t] : other.tables_) put_table(name, t);
}

FactStore parse_store(std::string_view text, const std::string& file_name) {
  auto parsed = lang::parse_kb(text, file_name);
  for (const auto& d : parsed.diagnostics)
    if (d.severity == lang::Severity::Error) throw ParseError(d.message, d.span.start_line, d.span.start_column);
  FactStore store = std::move(parsed.store);
  // Tables were filed first by the parser; relations keep textual order.
  FactStore out;
  const auto& clauses = parsed.kb.clauses();
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    std::size_t line = parsed.clause_lines[i];
    if (!clauses[i].is_fact()) throw ParseError("rules are not allowed in a fact store", line);
    if (!clauses[i].head.is_ground()) throw ParseError("fact " + to_string(clauses[i].head) + " is not ground", line);
    out.assert_fact(clauses[i].head);
  }
  if (!parsed.kb.prop_rules().empty()) throw ParseError("propositional rules are not allowed in a fact store", 1);
  for (const auto& name : store.table_names()) out.put_table(name, *store.table(name));
  return out;
}

std::string serialize_store(const FactStore& store) {
  std::string out = "# ace fact store\n";
  for (const auto& name : store.relation_names())
    for (const auto& f : store.relation(name)) out += to_string(f) + ".\n";
  for (const auto& name : store.table_names()) {
    const NumericTable& t = *store.table(name);
    out += "\ntable " + name + ":\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& r : t.rows) {
      out += r.label;
      for (double v : r.values) out += ',' + format_number(v);
      out += '\n';
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

FactStore load_store(const std::filesystem::path& path) { return parse_store(read_file(path), path.string()); }

void save_store(const FactStore& store, const std::filesystem::path& path) { write_file(path, serialize_store(store)); }

}  // namespace ace::core
