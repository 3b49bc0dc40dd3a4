#include "ace/core/term.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "ace/core/error.hpp"

namespace ace::core {

namespace {

const std::vector<Term>& no_args() {
  static const std::vector<Term> empty;
  return empty;
}

}  // namespace

Term Term::symbol(std::string name) { return Term(TermKind::Symbol, std::move(name)); }

Term Term::number(double value) {
  if (!std::isfinite(value)) throw Error("numbers must be finite");
  Term t(TermKind::Number, {});
  t.number_ = value;
  return t;
}

Term Term::text(std::string value) { return Term(TermKind::Text, std::move(value)); }

Term Term::variable(std::string name) {
  if (name.empty()) throw Error("variable name must be nonempty");
  return Term(TermKind::Variable, std::move(name));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (functor.empty()) throw Error("functor name must be nonempty");
  if (args.empty()) throw Error("compound term '" + functor + "' needs at least one argument");
  Term t(TermKind::Compound, std::move(functor));
  t.args_ = std::make_shared<const std::vector<Term>>(std::move(args));
  return t;
}

Term Term::list(std::vector<Term> items, std::optional<Term> tail) {
  Term out = tail ? *tail : empty_list();
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = compound(".", {*it, out});
  return out;
}

const std::vector<Term>& Term::args() const { return args_ ? *args_ : no_args(); }

bool Term::is_ground() const {
  if (kind_ == TermKind::Variable) return false;
  for (const auto& a : args())
    if (!a.is_ground()) return false;
  return true;
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (kind_ == TermKind::Variable) {
    for (const auto& v : out)
      if (v == name_) return;
    out.push_back(name_);
    return;
  }
  for (const auto& a : args()) a.collect_variables(out);
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case TermKind::Number:
      return a.number_ == b.number_;
    case TermKind::Compound:
      if (a.name_ != b.name_ || a.arity() != b.arity()) return false;
      if (a.args_ == b.args_) return true;
      return *a.args_ == *b.args_;
    default:
      return a.name_ == b.name_;
  }
}

std::optional<std::vector<Term>> list_items(const Term& t) {
  std::vector<Term> items;
  const Term* cur = &t;
  while (cur->is_list_cell()) {
    items.push_back(cur->args()[0]);
    cur = &cur->args()[1];
  }
  if (!cur->is_empty_list()) return std::nullopt;
  return items;
}

bool Atom::is_ground() const {
  for (const auto& a : args)
    if (!a.is_ground()) return false;
  return true;
}

Term Atom::as_term() const { return args.empty() ? Term::symbol(predicate) : Term::compound(predicate, args); }

Atom Atom::from_term(const Term& t) {
  if (t.is_symbol()) return Atom{t.name(), {}};
  if (t.is_compound()) return Atom{t.name(), t.args()};
  throw Error("'" + to_string(t) + "' is not callable");
}

bool is_variable_name(std::string_view name) {
  if (name.empty()) return false;
  char c = name.front();
  return (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(name.front() >= 'a' && name.front() <= 'z')) return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string format_number(double value) {
  std::array<char, 400> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  if (res.ec != std::errc()) throw Error("cannot format number");
  std::string out(buf.data(), res.ptr);
  if (out == "-0") out = "0";
  return out;
}

std::string quote_text(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

void write_term(const Term& t, std::string& out);

void write_list(const Term& t, std::string& out) {
  out += '[';
  const Term* cur = &t;
  bool first = true;
  while (cur->is_list_cell()) {
    if (!first) out += ", ";
    first = false;
    write_term(cur->args()[0], out);
    cur = &cur->args()[1];
  }
  if (!cur->is_empty_list()) {
    out += " | ";
    write_term(*cur, out);
  }
  out += ']';
}

void write_term(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Symbol:
    case TermKind::Variable:
      out += t.name();
      break;
    case TermKind::Number:
      out += format_number(t.number());
      break;
    case TermKind::Text:
      out += quote_text(t.name());
      break;
    case TermKind::Compound:
      if (t.is_list_cell()) {
        write_list(t, out);
        break;
      }
      out += t.name();
      out += '(';
      for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ", ";
        write_term(t.args()[i], out);
      }
      out += ')';
      break;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  write_term(t, out);
  return out;
}

std::string to_string(const Atom& a) { return to_string(a.as_term()); }

}  // namespace ace::core
