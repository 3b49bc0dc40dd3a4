#include "ace/core/knowledge_base.hpp"

#include <algorithm>

#include "ace/core/error.hpp"

namespace ace::core {

void KnowledgeBase::add_clause(HornClause clause) {
  if (clause.head.predicate.empty()) throw Error("clause head needs a predicate name");
  for (const auto& b : clause.body)
    if (b.predicate.empty()) throw Error("body atom needs a predicate name");
  index_[{clause.head.predicate, clause.head.arity()}].push_back(clauses_.size());
  clauses_.push_back(std::move(clause));
}

void KnowledgeBase::add_rule(PropRule rule) {
  if (rule.antecedents.empty()) throw Error("propositional rule needs at least one antecedent");
  if (rule.consequent.empty()) throw Error("propositional rule needs a consequent");
  if (std::find(rule.antecedents.begin(), rule.antecedents.end(), rule.consequent) != rule.antecedents.end())
    throw Error("proposition '" + rule.consequent + "' is both antecedent and consequent of one rule");
  for (const auto& [prop, _] : rule.questions)
    if (std::find(rule.antecedents.begin(), rule.antecedents.end(), prop) == rule.antecedents.end())
      throw Error("question attached to '" + prop + "', which is not an antecedent of the rule");
  rules_.push_back(std::move(rule));
}

void KnowledgeBase::append(const KnowledgeBase& other) {
  for (const auto& c : other.clauses_) add_clause(c);
  for (const auto& r : other.rules_) add_rule(r);
}

std::span<const std::size_t> KnowledgeBase::clauses_for(const std::string& name, std::size_t arity) const {
  auto it = index_.find({name, arity});
  if (it == index_.end()) return {};
  return it->second;
}

bool KnowledgeBase::defines(const std::string& name, std::size_t arity) const {
  return index_.count({name, arity}) != 0;
}

std::vector<std::pair<std::string, std::size_t>> KnowledgeBase::defined_predicates() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [key, _] : index_) out.push_back(key);
  return out;
}

}  // namespace ace::core
