#include "ace/scenarios/operations.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ace/core/error.hpp"
#include "ace/core/term.hpp"

namespace ace::scenarios {

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw Error("scenario config must be an object");
  c.threat_elevated = j.value("threat_elevated", c.threat_elevated);
  c.threat_high = j.value("threat_high", c.threat_high);
  c.new_technology_factor = j.value("new_technology_factor", c.new_technology_factor);
  c.currency = j.value("currency", c.currency);
  if (j.contains("altman")) {
    const auto& a = j["altman"];
    if (a.contains("weights")) {
      auto w = a["weights"].get<std::vector<double>>();
      if (w.size() != 5) throw Error("altman weights need five values");
      std::copy(w.begin(), w.end(), c.altman.weights.begin());
    }
    c.altman.distress_below = a.value("distress_below", c.altman.distress_below);
    c.altman.safe_above = a.value("safe_above", c.altman.safe_above);
  }
  if (!(c.threat_elevated <= c.threat_high)) throw Error("threat thresholds must be ordered");
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"threat_elevated", threat_elevated},
          {"threat_high", threat_high},
          {"new_technology_factor", new_technology_factor},
          {"currency", currency},
          {"altman",
           {{"weights", std::vector<double>(altman.weights.begin(), altman.weights.end())},
            {"distress_below", altman.distress_below},
            {"safe_above", altman.safe_above}}}};
}

std::string threat_level_name(ThreatLevel level) {
  switch (level) {
    case ThreatLevel::Low: return "low";
    case ThreatLevel::Elevated: return "elevated";
    case ThreatLevel::High: return "high";
  }
  return "";
}

ThreatLevel threat_level(double p, const ScenarioConfig& config) {
  if (p >= config.threat_high) return ThreatLevel::High;
  if (p >= config.threat_elevated) return ThreatLevel::Elevated;
  return ThreatLevel::Low;
}

ThreatAssessment assess_threat_tree(const decision::EventTree& tree, const std::string& outcome,
                                    const ScenarioConfig& config) {
  ThreatAssessment t{"event-tree", decision::event_tree_probability(tree, outcome), ThreatLevel::Low};
  t.level = threat_level(t.probability, config);
  return t;
}

ThreatAssessment assess_threat_bayes(const decision::BayesInput& input, std::size_t index,
                                     const ScenarioConfig& config) {
  auto post = decision::bayes_posterior(input);
  if (index >= post.size()) throw Error("hypothesis index out of range");
  ThreatAssessment t{"bayes", post[index], ThreatLevel::Low};
  t.level = threat_level(t.probability, config);
  return t;
}

Money ExpenseSheet::total() const {
  Money sum(0, currency);
  for (const auto& l : lines) sum += l.total();
  return sum;
}

nlohmann::json ExpenseSheet::to_json() const {
  nlohmann::json lines_json = nlohmann::json::array();
  for (const auto& l : lines)
    lines_json.push_back({{"label", l.label},
                          {"quantity", l.quantity},
                          {"unit_cost", l.unit_cost.to_json()},
                          {"total", l.total().to_json()}});
  return {{"currency", currency}, {"lines", lines_json}, {"total", total().to_json()}};
}

ExpenseSheet sum_expense_sheets(const std::vector<ExpenseSheet>& sheets, const std::vector<std::string>& labels,
                                const std::string& currency) {
  ExpenseSheet out{currency, {}};
  for (std::size_t i = 0; i < sheets.size(); ++i) {
    if (sheets[i].currency != currency)
      throw Error("mixed currencies: " + sheets[i].currency + " and " + currency);
    out.lines.push_back({i < labels.size() ? labels[i] : std::to_string(i + 1), 1.0, sheets[i].total()});
  }
  return out;
}

const PlannedMeasure* RestorationPlan::find(const std::string& id) const {
  for (const auto& m : measures)
    if (m.measure.id == id) return &m;
  return nullptr;
}

double RestorationPlan::completion_day() const {
  double d = 0.0;
  for (const auto& m : measures) d = std::max(d, m.end_day);
  return d;
}

RestorationPlan plan_restoration(const std::vector<MeasureTemplate>& templates,
                                 const std::vector<std::string>& damage_tags) {
  std::map<std::string, const MeasureTemplate*> by_id;
  for (const auto& t : templates) {
    if (!by_id.emplace(t.id, &t).second) throw Error("duplicate measure template '" + t.id + "'");
    if (t.duration_days < 0) throw Error("measure '" + t.id + "' has a negative duration");
  }
  for (const auto& t : templates)
    for (const auto& p : t.prerequisites)
      if (!by_id.count(p)) throw Error("measure '" + t.id + "' requires unknown measure '" + p + "'");

  // Cycle check over the whole template graph.
  std::map<std::string, int> mark;
  std::vector<std::string> path;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (mark[id] == 2) return;
    if (mark[id] == 1) {
      auto from = std::find(path.begin(), path.end(), id);
      std::string cycle;
      for (auto it = from; it != path.end(); ++it) cycle += *it + " -> ";
      throw Error("prerequisite cycle: " + cycle + id);
    }
    mark[id] = 1;
    path.push_back(id);
    for (const auto& p : by_id.at(id)->prerequisites) visit(p);
    path.pop_back();
    mark[id] = 2;
  };
  for (const auto& [id, t] : by_id) visit(id);

  RestorationPlan plan;
  std::set<std::string> tags(damage_tags.begin(), damage_tags.end());
  std::set<std::string> selected;
  for (const auto& t : templates)
    for (const auto& tag : t.tags)
      if (tags.count(tag)) selected.insert(t.id);
  if (selected.empty()) {
    plan.warnings.push_back(damage_tags.empty() ? "event has no damage tags; restoration plan is empty"
                                                : "no measure template matches the damage tags");
    return plan;
  }

  // Prerequisites inside the plan, looking through templates left out.
  std::map<std::string, std::set<std::string>> deps;
  for (const auto& id : selected) {
    std::set<std::string> seen;
    std::vector<std::string> stack(by_id.at(id)->prerequisites);
    while (!stack.empty()) {
      auto p = stack.back();
      stack.pop_back();
      if (!seen.insert(p).second) continue;
      if (selected.count(p))
        deps[id].insert(p);
      else
        for (const auto& q : by_id.at(p)->prerequisites) stack.push_back(q);
    }
  }

  std::set<std::string> done, ready;
  std::map<std::string, double> end;
  for (const auto& id : selected)
    if (deps[id].empty()) ready.insert(id);
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    PlannedMeasure m{*by_id.at(id), {deps[id].begin(), deps[id].end()}, 0.0, 0.0};
    for (const auto& p : deps[id]) m.start_day = std::max(m.start_day, end.at(p));
    m.end_day = m.start_day + m.measure.duration_days;
    end[id] = m.end_day;
    done.insert(id);
    plan.measures.push_back(std::move(m));
    for (const auto& other : selected) {
      if (done.count(other) || ready.count(other)) continue;
      if (std::all_of(deps[other].begin(), deps[other].end(), [&](const std::string& p) { return done.count(p) > 0; }))
        ready.insert(other);
    }
  }
  return plan;
}

std::map<std::string, double> ConsequenceReport::product_downtime() const {
  std::map<std::string, double> out;
  for (const auto& l : lost_output) out[l.product] = std::max(out[l.product], l.downtime_days);
  return out;
}

nlohmann::json ConsequenceReport::to_json() const {
  nlohmann::json lost = nlohmann::json::array();
  for (const auto& l : lost_output)
    lost.push_back({{"asset", l.asset},
                    {"product", l.product},
                    {"downtime_days", l.downtime_days},
                    {"volume", l.volume},
                    {"value", l.value ? l.value->to_json() : nlohmann::json(nullptr)}});
  nlohmann::json pen = nlohmann::json::array();
  for (const auto& p : penalties)
    pen.push_back({{"contract", p.contract}, {"product", p.product}, {"delay_days", p.delay_days}, {"amount", p.amount.to_json()}});
  return {{"factors",
           {{"sale_volume_change", {{"lost_output", lost}, {"total", sale_volume_change.to_json()}}},
            {"penalty_sanctions", {{"items", pen}, {"total", penalties_total.to_json()}}},
            {"account_payable_increase",
             {{"credit_need", credit_need.to_json()}, {"total", account_payable_increase.to_json()}}}}},
          {"total", total.to_json()},
          {"unquantified", unquantified},
          {"narrative", narrative}};
}

double asset_downtime(const AssetOutput& asset, const RestorationPlan& plan) {
  double d = 0.0;
  for (const auto& id : asset.requires_measures)
    if (const auto* m = plan.find(id)) d = std::max(d, m->end_day);
  return d;
}

ConsequenceReport assess_consequences(const RestorationPlan& plan, const Money& restoration_cost,
                                      const ConsequenceInputs& in) {
  ConsequenceReport r;
  const std::string& cur = in.currency;
  r.sale_volume_change = Money(0, cur);
  r.penalties_total = Money(0, cur);
  r.account_payable_increase = Money(0, cur);
  r.credit_need = Money(0, cur);
  for (const auto& a : in.assets) {
    double down = asset_downtime(a, plan);
    if (down <= 0.0) continue;
    LostOutput l{a.asset, a.product, down, a.daily_output * down, std::nullopt};
    auto price = in.prices.find(a.product);
    if (price == in.prices.end()) {
      r.unquantified.push_back("no price for product '" + a.product + "'");
    } else {
      l.value = price->second.times(l.volume);
      r.sale_volume_change += *l.value;
    }
    r.lost_output.push_back(std::move(l));
  }
  auto downtime = r.product_downtime();
  for (const auto& c : in.contracts) {
    auto it = downtime.find(c.product);
    if (it == downtime.end() || it->second <= c.slack_days) continue;
    Penalty p{c.id, c.product, it->second - c.slack_days, c.penalty_per_day.times(it->second - c.slack_days)};
    r.penalties_total += p.amount;
    r.penalties.push_back(std::move(p));
  }
  if (!in.credit) {
    r.unquantified.push_back("no credit terms; account payable increase not assessed");
  } else if (in.credit->liquidity < restoration_cost) {
    r.credit_need = restoration_cost - in.credit->liquidity;
    r.account_payable_increase = r.credit_need.times(in.credit->annual_rate * in.credit->term_years);
  }
  r.total = r.sale_volume_change + r.penalties_total + r.account_payable_increase;
  double volume = 0.0;
  for (const auto& l : r.lost_output) volume += l.volume;
  r.narrative = "Lost output " + core::format_number(volume) + " units across " + std::to_string(r.lost_output.size()) +
                " asset/product lines; " + std::to_string(r.penalties.size()) + " contract(s) penalised; credit need " +
                r.credit_need.to_string() + " " + cur + ".";
  return r;
}

std::vector<double> correct_plan(const std::vector<double>& volumes, double period_days, double downtime_days,
                                 double capacity_share) {
  if (!(period_days > 0)) throw Error("period length must be positive");
  capacity_share = std::clamp(capacity_share, 0.0, 1.0);
  std::vector<double> out(volumes.size());
  for (std::size_t k = 0; k < volumes.size(); ++k) {
    double lo = period_days * static_cast<double>(k), hi = lo + period_days;
    double overlap = std::max(0.0, std::min(hi, downtime_days) - lo);
    double factor = 1.0 - capacity_share * overlap / period_days;
    out[k] = overlap > 0.0 ? std::max(0.0, volumes[k] * factor) : volumes[k];
  }
  return out;
}

double shocked_unit_cost(const CostStructure& c, const CostShock& s) {
  double domestic = c.components - c.imported;
  double cost = c.imported * s.imported + domestic * s.domestic_components + c.materials * s.materials +
                c.labour * s.labour + c.energy * s.energy + c.logistics * s.logistics;
  return cost * s.overall;
}

std::vector<ProfitabilityRow> find_unprofitable(const std::vector<CostStructure>& products, const CostShock& shock) {
  std::vector<ProfitabilityRow> out;
  for (const auto& c : products) {
    if (c.imported > c.components) throw Error("product '" + c.product + "': imported share exceeds components");
    double cost = shocked_unit_cost(c, shock);
    out.push_back({c.product, c.unit_cost(), cost, c.price, cost >= c.price});
  }
  return out;
}

double weighted_score(const std::vector<double>& weights, const std::vector<double>& scores) {
  if (weights.size() != scores.size()) throw Error("criteria weights and scores differ in length");
  double wsum = 0.0, s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    wsum += weights[i];
    s += weights[i] * scores[i];
  }
  return wsum == 0.0 ? 0.0 : s / wsum;
}

}  // namespace ace::scenarios
