#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ace/core/fact_store.hpp"

namespace ace::decision {

/// Tolerance on probability distributions summing to one.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Preference values V[i][j] of variant i under situation j.
struct DecisionTable {
  std::vector<std::string> variants;
  std::vector<std::string> situations;
  std::vector<std::vector<double>> values;
  std::optional<std::vector<double>> probabilities;

  void validate() const;
};

enum class Criterion { Pessimistic, Optimistic, Pragmatic };

std::string criterion_name(Criterion c);
Criterion parse_criterion(std::string_view name);

struct ChoiceResult {
  std::size_t variant = 0;  // 0-based
  double value = 0.0;
  Criterion criterion = Criterion::Pessimistic;
  std::vector<double> per_variant;
};

/// Maximin: best row minimum. Ties go to the lowest index everywhere.
ChoiceResult choose_pessimistic(const DecisionTable& table);
/// Maximax: best row maximum.
ChoiceResult choose_optimistic(const DecisionTable& table);
/// Best expected preference under the table's probabilities.
ChoiceResult choose_pragmatic(const DecisionTable& table);
ChoiceResult choose(const DecisionTable& table, Criterion criterion);

/// First row: an empty (or label) cell then situation labels. An optional
/// row whose first cell is `P` or `probability` follows. Remaining rows:
/// variant label then one value per situation.
DecisionTable parse_decision_table_csv(std::string_view text);

struct BayesInput {
  std::vector<std::string> hypotheses;
  std::vector<double> priors;
  std::vector<double> likelihoods;
  std::string evidence;
};

/// P(H_i | E) = P(H_i) P(E | H_i) / sum_j P(H_j) P(E | H_j).
std::vector<double> bayes_posterior(const BayesInput& input);

struct Branch {
  std::string child;
  double probability = 0.0;
};

/// Rooted tree of probabilistic branches; leaves carry outcome classes.
struct EventTree {
  std::string root;
  std::map<std::string, std::vector<Branch>> branches;
  std::map<std::string, std::string> outcomes;

  void validate() const;
  /// Reads `branch(Node, Child, Prob)` and `outcome(Leaf, Class)` facts.
  /// The root is the only node that is never a child.
  static EventTree from_store(const core::FactStore& store);
};

/// Sum over root-to-leaf paths ending in `outcome` of the branch products.
double event_tree_probability(const EventTree& tree, const std::string& outcome);

/// Working capital, retained earnings and EBIT over total assets, market
/// value of equity over liabilities, sales over total assets.
struct FinancialProfile {
  std::array<double, 5> ratios{};
};

/// Classical public Z-score constants; overridable.
struct AltmanConfig {
  std::array<double, 5> weights{1.2, 1.4, 3.3, 0.6, 1.0};
  double distress_below = 1.81;
  double safe_above = 2.99;
};

enum class Zone { Distress, Grey, Safe };
std::string zone_name(Zone z);

struct AltmanResult {
  double z = 0.0;
  Zone zone = Zone::Distress;
};

AltmanResult altman_z(const FinancialProfile& profile, const AltmanConfig& config = {});

}  // namespace ace::decision
