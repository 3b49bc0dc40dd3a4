#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ace/core/term.hpp"

namespace ace::core {

/// `head <- body1, body2, ...`; an empty body makes a fact.
struct HornClause {
  Atom head;
  std::vector<Atom> body;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const HornClause&, const HornClause&) = default;
};

/// Propositional rule `A1 & A2 & ... -> B`, with optional operator
/// question text keyed by proposition.
struct PropRule {
  std::vector<std::string> antecedents;
  std::string consequent;
  std::map<std::string, std::string> questions;

  friend bool operator==(const PropRule&, const PropRule&) = default;
};

struct KbMetadata {
  std::string name;
  std::string version;
  friend bool operator==(const KbMetadata&, const KbMetadata&) = default;
};

/// Ordered Horn clauses and propositional rules. Clause order is the
/// order alternatives are tried in.
class KnowledgeBase {
 public:
  KbMetadata metadata;

  void add_clause(HornClause clause);
  void add_rule(PropRule rule);
  /// Concatenates another knowledge base after this one.
  void append(const KnowledgeBase& other);

  const std::vector<HornClause>& clauses() const { return clauses_; }
  const std::vector<PropRule>& prop_rules() const { return rules_; }

  /// Indices into `clauses()` whose head is name/arity, in order.
  std::span<const std::size_t> clauses_for(const std::string& name, std::size_t arity) const;
  bool defines(const std::string& name, std::size_t arity) const;
  /// Every name/arity that has at least one clause.
  std::vector<std::pair<std::string, std::size_t>> defined_predicates() const;

  /// Structural equality of clauses and rules; metadata is not compared.
  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
    return a.clauses_ == b.clauses_ && a.rules_ == b.rules_;
  }

 private:
  std::vector<HornClause> clauses_;
  std::vector<PropRule> rules_;
  std::map<std::pair<std::string, std::size_t>, std::vector<std::size_t>> index_;
};

}  // namespace ace::core
