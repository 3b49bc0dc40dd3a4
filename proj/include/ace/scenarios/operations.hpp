#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/decision/decision.hpp"
#include "ace/scenarios/money.hpp"

namespace ace::scenarios {

/// Named configuration constants; none of them come from the rule files.
struct ScenarioConfig {
  /// Threat level: low below `threat_elevated`, high from `threat_high`.
  double threat_elevated = 0.05;
  double threat_high = 0.25;
  /// Competitor consumer value must exceed own by this factor to propose
  /// new technology.
  double new_technology_factor = 1.2;
  decision::AltmanConfig altman;
  std::string currency = "USD";

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class ThreatLevel { Low, Elevated, High };
std::string threat_level_name(ThreatLevel level);
ThreatLevel threat_level(double probability, const ScenarioConfig& config);

struct ThreatAssessment {
  std::string method;  // "event-tree" or "bayes"
  double probability = 0.0;
  ThreatLevel level = ThreatLevel::Low;
};

/// Probability of `outcome` at the leaves of the tree.
ThreatAssessment assess_threat_tree(const decision::EventTree& tree, const std::string& outcome,
                                    const ScenarioConfig& config);
/// Posterior of hypothesis `index` (0-based).
ThreatAssessment assess_threat_bayes(const decision::BayesInput& input, std::size_t index,
                                     const ScenarioConfig& config);

struct ExpenseLine {
  std::string label;
  double quantity = 0.0;
  Money unit_cost;

  Money total() const { return unit_cost.times(quantity); }
};

struct ExpenseSheet {
  std::string currency;
  std::vector<ExpenseLine> lines;

  /// Sum of the rounded line totals.
  Money total() const;
  nlohmann::json to_json() const;
};

/// Aggregate sheet whose lines are the per-sheet totals, labelled by `labels`.
/// Throws on mixed currencies.
ExpenseSheet sum_expense_sheets(const std::vector<ExpenseSheet>& sheets, const std::vector<std::string>& labels,
                                const std::string& currency);

struct MeasureTemplate {
  std::string id;
  std::string description;
  std::vector<std::string> tags;
  std::vector<std::string> prerequisites;
  double duration_days = 0.0;
  ExpenseSheet expenses;
};

struct PlannedMeasure {
  MeasureTemplate measure;
  /// Prerequisites present in the plan, direct or through omitted templates.
  std::vector<std::string> prerequisites;
  double start_day = 0.0;
  double end_day = 0.0;
};

struct RestorationPlan {
  std::vector<PlannedMeasure> measures;
  std::vector<std::string> warnings;

  const PlannedMeasure* find(const std::string& id) const;
  /// Completion day of the whole plan.
  double completion_day() const;
};

/// Instantiates every template sharing a tag with `damage_tags`, orders the
/// result topologically with ties by id, and schedules it: a measure
/// starts when its last prerequisite ends; unrelated measures overlap.
/// Throws on a prerequisite cycle or an unknown prerequisite.
RestorationPlan plan_restoration(const std::vector<MeasureTemplate>& templates,
                                 const std::vector<std::string>& damage_tags);

struct AssetOutput {
  std::string asset;
  std::string product;
  double daily_output = 0.0;
  /// Measures that must finish before the asset produces again.
  std::vector<std::string> requires_measures;
};

struct Contract {
  std::string id;
  std::string product;
  /// Days of downtime the delivery schedule absorbs without penalty.
  double slack_days = 0.0;
  Money penalty_per_day;
};

struct CreditTerms {
  Money liquidity;
  double annual_rate = 0.0;
  double term_years = 1.0;
};

struct ConsequenceInputs {
  std::vector<AssetOutput> assets;
  std::map<std::string, Money> prices;
  std::vector<Contract> contracts;
  std::optional<CreditTerms> credit;
  std::string currency = "USD";
};

struct LostOutput {
  std::string asset;
  std::string product;
  double downtime_days = 0.0;
  double volume = 0.0;
  std::optional<Money> value;
};

struct Penalty {
  std::string contract;
  std::string product;
  double delay_days = 0.0;
  Money amount;
};

struct ConsequenceReport {
  std::vector<LostOutput> lost_output;
  Money sale_volume_change;
  std::vector<Penalty> penalties;
  Money penalties_total;
  Money account_payable_increase;
  Money credit_need;
  Money total;
  std::vector<std::string> unquantified;
  std::string narrative;

  /// Downtime per product: the longest downtime of the assets making it.
  std::map<std::string, double> product_downtime() const;
  nlohmann::json to_json() const;
};

/// Downtime of an asset is the end day of the last measure it requires
/// (zero when none of them is in the plan).
double asset_downtime(const AssetOutput& asset, const RestorationPlan& plan);

ConsequenceReport assess_consequences(const RestorationPlan& plan, const Money& restoration_cost,
                                      const ConsequenceInputs& inputs);

/// Per-period volumes for one product; periods have equal length and the
/// downtime starts at day zero. `capacity_share` is the fraction of the
/// product's capacity that is lost while down.
std::vector<double> correct_plan(const std::vector<double>& volumes, double period_days, double downtime_days,
                                 double capacity_share = 1.0);

struct CostStructure {
  std::string product;
  double components = 0.0;
  double materials = 0.0;
  double labour = 0.0;
  double energy = 0.0;
  double logistics = 0.0;
  /// Part of `components` bought abroad.
  double imported = 0.0;
  double price = 0.0;

  double unit_cost() const { return components + materials + labour + energy + logistics; }
};

/// Multipliers applied to cost parts; 1 leaves a part unchanged.
struct CostShock {
  double imported = 1.0;
  double domestic_components = 1.0;
  double materials = 1.0;
  double labour = 1.0;
  double energy = 1.0;
  double logistics = 1.0;
  /// Applied to the whole unit cost after the parts.
  double overall = 1.0;
};

struct ProfitabilityRow {
  std::string product;
  double old_cost = 0.0;
  double new_cost = 0.0;
  double price = 0.0;
  bool unprofitable = false;
};

double shocked_unit_cost(const CostStructure& c, const CostShock& shock);
/// Unprofitable when the new unit cost reaches the price.
std::vector<ProfitabilityRow> find_unprofitable(const std::vector<CostStructure>& products, const CostShock& shock);

/// Sum of weight x score over the sum of weights; 0 when the weights sum to 0.
double weighted_score(const std::vector<double>& weights, const std::vector<double>& scores);

}  // namespace ace::scenarios
