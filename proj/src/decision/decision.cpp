#include "ace/decision/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

#include "ace/core/csv.hpp"
#include "ace/core/error.hpp"

namespace ace::decision {

namespace {

void check_distribution(const std::vector<double>& p, const std::string& what) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw Error(what + " must be non-negative and finite");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", sum);
    throw Error(what + " sum " + buf);
  }
}

ChoiceResult pick(const DecisionTable& table, Criterion c, const std::function<double(const std::vector<double>&)>& f) {
  table.validate();
  ChoiceResult r;
  r.criterion = c;
  for (const auto& row : table.values) r.per_variant.push_back(f(row));
  for (std::size_t i = 1; i < r.per_variant.size(); ++i)
    if (r.per_variant[i] > r.per_variant[r.variant]) r.variant = i;
  r.value = r.per_variant[r.variant];
  return r;
}

}  // namespace

void DecisionTable::validate() const {
  if (values.empty() || variants.empty()) throw Error("decision table is empty");
  if (situations.empty()) throw Error("decision table has no situations");
  if (values.size() != variants.size())
    throw Error("decision table has " + std::to_string(values.size()) + " rows for " +
                std::to_string(variants.size()) + " variants");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != situations.size())
      throw Error("variant '" + variants[i] + "' has " + std::to_string(values[i].size()) + " values, expected " +
                  std::to_string(situations.size()));
    for (double v : values[i])
      if (!std::isfinite(v)) throw Error("variant '" + variants[i] + "' has a non-finite preference");
  }
  if (probabilities) {
    if (probabilities->size() != situations.size()) throw Error("probability count does not match situations");
    check_distribution(*probabilities, "probabilities");
  }
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Pessimistic: return "pessimistic";
    case Criterion::Optimistic: return "optimistic";
    case Criterion::Pragmatic: return "pragmatic";
  }
  return "";
}

Criterion parse_criterion(std::string_view name) {
  if (name == "pessimistic" || name == "minimax" || name == "maximin") return Criterion::Pessimistic;
  if (name == "optimistic" || name == "maximax") return Criterion::Optimistic;
  if (name == "pragmatic" || name == "expected") return Criterion::Pragmatic;
  throw Error("unknown criterion '" + std::string(name) + "'");
}

ChoiceResult choose_pessimistic(const DecisionTable& table) {
  return pick(table, Criterion::Pessimistic, [](const auto& row) { return *std::min_element(row.begin(), row.end()); });
}

ChoiceResult choose_optimistic(const DecisionTable& table) {
  return pick(table, Criterion::Optimistic, [](const auto& row) { return *std::max_element(row.begin(), row.end()); });
}

ChoiceResult choose_pragmatic(const DecisionTable& table) {
  if (!table.probabilities) throw Error("pragmatic choice needs situation probabilities");
  const auto& p = *table.probabilities;
  return pick(table, Criterion::Pragmatic, [&](const auto& row) {
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += p[j] * row[j];
    return s;
  });
}

ChoiceResult choose(const DecisionTable& table, Criterion criterion) {
  switch (criterion) {
    case Criterion::Pessimistic: return choose_pessimistic(table);
    case Criterion::Optimistic: return choose_optimistic(table);
    case Criterion::Pragmatic: return choose_pragmatic(table);
  }
  throw Error("unknown criterion");
}

DecisionTable parse_decision_table_csv(std::string_view text) {
  auto rows = core::parse_csv(text);
  if (rows.empty()) throw Error("decision table CSV is empty");
  DecisionTable t;
  t.situations.assign(rows[0].cells.begin() + 1, rows[0].cells.end());
  std::size_t first = 1;
  auto is_prob = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    return s == "p" || s == "probability" || s == "probabilities";
  };
  auto numbers = [&](const core::CsvRow& r) {
    if (r.cells.size() != rows[0].cells.size())
      throw ParseError("row has " + std::to_string(r.cells.size()) + " cells, header has " +
                           std::to_string(rows[0].cells.size()),
                       r.line);
    std::vector<double> v;
    for (std::size_t j = 1; j < r.cells.size(); ++j) v.push_back(core::parse_cell_number(r.cells[j], r.line));
    return v;
  };
  if (rows.size() > 1 && is_prob(rows[1].cells[0])) {
    t.probabilities = numbers(rows[1]);
    first = 2;
  }
  for (std::size_t i = first; i < rows.size(); ++i) {
    t.variants.push_back(rows[i].cells[0]);
    t.values.push_back(numbers(rows[i]));
  }
  t.validate();
  return t;
}

std::vector<double> bayes_posterior(const BayesInput& in) {
  const std::size_t n = in.priors.size();
  if (n == 0) throw Error("bayes needs at least one hypothesis");
  if (in.likelihoods.size() != n) throw Error("bayes: likelihood count does not match priors");
  if (!in.hypotheses.empty() && in.hypotheses.size() != n) throw Error("bayes: label count does not match priors");
  check_distribution(in.priors, "priors");
  for (double l : in.likelihoods)
    if (!(l >= 0.0 && l <= 1.0)) throw Error("likelihoods must lie in [0, 1]");
  double denom = 0.0;
  for (std::size_t i = 0; i < n; ++i) denom += in.priors[i] * in.likelihoods[i];
  if (!(denom > 0.0)) throw Error("evidence impossible under all hypotheses");
  std::vector<double> post(n);
  for (std::size_t i = 0; i < n; ++i) post[i] = in.priors[i] * in.likelihoods[i] / denom;
  return post;
}

void EventTree::validate() const {
  if (root.empty()) throw Error("event tree has no root");
  std::set<std::string> visiting;
  std::function<void(const std::string&)> walk = [&](const std::string& node) {
    if (!visiting.insert(node).second) throw Error("event tree has a cycle through '" + node + "'");
    auto it = branches.find(node);
    if (it == branches.end() || it->second.empty()) {
      if (!outcomes.count(node)) throw Error("event tree leaf '" + node + "' has no outcome");
    } else {
      std::vector<double> p;
      for (const auto& b : it->second) p.push_back(b.probability);
      check_distribution(p, "branch probabilities at '" + node + "'");
      for (const auto& b : it->second) walk(b.child);
    }
    visiting.erase(node);
  };
  walk(root);
}

EventTree EventTree::from_store(const core::FactStore& store) {
  EventTree t;
  std::set<std::string> children;
  std::vector<std::string> parents;
  auto name = [](const core::Term& term) {
    if (term.is_number()) return core::format_number(term.number());
    return term.name();
  };
  for (const auto& f : store.relation("branch")) {
    if (f.arity() != 3 || !f.args[2].is_number()) throw Error("branch/3 expects (node, child, probability)");
    auto node = name(f.args[0]), child = name(f.args[1]);
    if (!t.branches.count(node)) parents.push_back(node);
    t.branches[node].push_back({child, f.args[2].number()});
    children.insert(child);
  }
  for (const auto& f : store.relation("outcome")) {
    if (f.arity() != 2) throw Error("outcome/2 expects (leaf, class)");
    t.outcomes[name(f.args[0])] = name(f.args[1]);
  }
  std::vector<std::string> roots;
  for (const auto& p : parents)
    if (!children.count(p)) roots.push_back(p);
  if (roots.size() != 1) throw Error("event tree needs exactly one root, found " + std::to_string(roots.size()));
  t.root = roots[0];
  t.validate();
  return t;
}

double event_tree_probability(const EventTree& tree, const std::string& outcome) {
  tree.validate();
  std::function<double(const std::string&)> walk = [&](const std::string& node) {
    auto it = tree.branches.find(node);
    if (it == tree.branches.end() || it->second.empty()) return tree.outcomes.at(node) == outcome ? 1.0 : 0.0;
    double p = 0.0;
    for (const auto& b : it->second) p += b.probability * walk(b.child);
    return p;
  };
  return walk(tree.root);
}

std::string zone_name(Zone z) {
  switch (z) {
    case Zone::Distress: return "distress";
    case Zone::Grey: return "grey";
    case Zone::Safe: return "safe";
  }
  return "";
}

AltmanResult altman_z(const FinancialProfile& profile, const AltmanConfig& config) {
  AltmanResult r;
  for (std::size_t i = 0; i < 5; ++i) {
    if (!std::isfinite(profile.ratios[i])) throw Error("financial ratio X" + std::to_string(i + 1) + " is not finite");
    r.z += config.weights[i] * profile.ratios[i];
  }
  if (r.z < config.distress_below)
    r.zone = Zone::Distress;
  else if (r.z > config.safe_above)
    r.zone = Zone::Safe;
  else
    r.zone = Zone::Grey;
  return r;
}

}  // namespace ace::decision
