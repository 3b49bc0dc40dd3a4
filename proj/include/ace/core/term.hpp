#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ace::core {

enum class TermKind { Symbol, Number, Text, Variable, Compound };

/// Immutable logic term. Compound arguments are shared between copies.
///
/// Variables are written with a leading uppercase letter or underscore;
/// everything else with a lowercase identifier is a constant symbol.
class Term {
 public:
  Term() : Term(TermKind::Symbol, "[]") {}

  static Term symbol(std::string name);
  static Term number(double value);
  static Term text(std::string value);
  static Term variable(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);

  /// Builds `[a, b | tail]`; tail defaults to the empty list.
  static Term list(std::vector<Term> items, std::optional<Term> tail = std::nullopt);
  static Term empty_list() { return symbol("[]"); }

  TermKind kind() const { return kind_; }
  bool is_symbol() const { return kind_ == TermKind::Symbol; }
  bool is_number() const { return kind_ == TermKind::Number; }
  bool is_text() const { return kind_ == TermKind::Text; }
  bool is_variable() const { return kind_ == TermKind::Variable; }
  bool is_compound() const { return kind_ == TermKind::Compound; }

  /// Symbol name, variable name, text content or compound functor.
  const std::string& name() const { return name_; }
  double number() const { return number_; }
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args_ ? args_->size() : 0; }

  bool is_ground() const;
  bool is_list_cell() const { return kind_ == TermKind::Compound && name_ == "." && arity() == 2; }
  bool is_empty_list() const { return kind_ == TermKind::Symbol && name_ == "[]"; }

  /// Collects variable names in first-occurrence order.
  void collect_variables(std::vector<std::string>& out) const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  Term(TermKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  TermKind kind_;
  std::string name_;
  double number_ = 0.0;
  std::shared_ptr<const std::vector<Term>> args_;
};

/// Elements of a proper list, or nullopt when `t` is not one.
std::optional<std::vector<Term>> list_items(const Term& t);

/// Predicate application `name(args...)`; arity zero is written bare.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;
  Term as_term() const;
  static Atom from_term(const Term& t);

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
};

bool is_variable_name(std::string_view name);
bool is_identifier(std::string_view name);

/// Shortest decimal text that reads back to the same double (no exponent).
std::string format_number(double value);
std::string quote_text(std::string_view value);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);

}  // namespace ace::core
