#include "ace/scenarios/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ace/lang/parser.hpp"
#include "ace/prediction/prediction.hpp"

namespace ace::scenarios {

using core::Term;
using inference::Answers;
using inference::CallContext;
using nlohmann::json;

SchemaError::SchemaError(std::vector<std::string> problems)
    : Error([&] {
        std::string m = "invalid event";
        for (const auto& p : problems) m += "; " + p;
        return m;
      }()),
      problems_(std::move(problems)) {}

const std::vector<std::string>& valid_subtypes(const std::string& category) {
  static const std::map<std::string, std::vector<std::string>> table{
      {"production", {"emergency", "equipment-damage", "infrastructure-failure"}},
      {"market", {"new-competitive-goods", "new-segment", "partner-financial-change"}},
      {"region", {"fx-change", "customs-change", "tax-change", "political-crisis", "energy-crisis", "ecocatastrophe"}}};
  static const std::vector<std::string> none;
  auto it = table.find(category);
  return it == table.end() ? none : it->second;
}

std::string tag_symbol(const std::string& tag) {
  std::string s;
  for (char c : tag) s += (c == '-' || c == ' ') ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

CriticalEvent CriticalEvent::from_json(const json& j) {
  std::vector<std::string> bad;
  CriticalEvent e;
  if (!j.is_object()) throw SchemaError({"event: must be a JSON object"});
  auto str = [&](const char* key, std::string& out, bool required) {
    if (!j.contains(key)) {
      if (required) bad.push_back(std::string(key) + ": required");
      return;
    }
    if (!j[key].is_string())
      bad.push_back(std::string(key) + ": must be a string");
    else
      out = j[key].get<std::string>();
  };
  auto strings = [&](const char* key, std::vector<std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) {
      bad.push_back(std::string(key) + ": must be an array of strings");
      return;
    }
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      const auto& v = j[key][i];
      if (!v.is_string() || v.get<std::string>().empty())
        bad.push_back(std::string(key) + "[" + std::to_string(i) + "]: must be a nonempty string");
      else
        out.push_back(v.get<std::string>());
    }
  };
  str("id", e.id, true);
  if (j.contains("id") && j["id"].is_string() && e.id.empty()) bad.push_back("id: must not be empty");
  str("category", e.category, true);
  str("subtype", e.subtype, true);
  str("phase", e.phase, false);
  str("timestamp", e.timestamp, false);
  str("title", e.title, false);
  str("narrative", e.narrative, false);
  strings("tags", e.tags);
  strings("assets", e.assets);
  if (!e.category.empty()) {
    const auto& subs = valid_subtypes(e.category);
    if (subs.empty())
      bad.push_back("category: unknown category '" + e.category + "'");
    else if (!e.subtype.empty() && std::find(subs.begin(), subs.end(), e.subtype) == subs.end())
      bad.push_back("subtype: '" + e.subtype + "' is not a " + e.category + " subtype");
  }
  if (e.phase != "occurred" && e.phase != "threat") bad.push_back("phase: must be 'occurred' or 'threat'");
  if (j.contains("measurements")) {
    const auto& m = j["measurements"];
    if (!m.is_object()) {
      bad.push_back("measurements: must be an object");
    } else {
      for (const auto& [name, v] : m.items()) {
        Measurement x;
        if (v.is_number()) {
          x.value = v.get<double>();
        } else if (v.is_object() && v.contains("value") && v["value"].is_number()) {
          x.value = v["value"].get<double>();
          if (v.contains("unit")) {
            if (v["unit"].is_string())
              x.unit = v["unit"].get<std::string>();
            else
              bad.push_back("measurements." + name + ".unit: must be a string");
          }
        } else {
          bad.push_back("measurements." + name + ": must be a number or {value, unit}");
          continue;
        }
        if (!std::isfinite(x.value)) bad.push_back("measurements." + name + ": must be finite");
        e.measurements[name] = x;
      }
    }
  }
  if (j.contains("signals")) {
    if (!j["signals"].is_object())
      bad.push_back("signals: must be an object");
    else
      e.signals = j["signals"];
  }
  if (e.phase == "threat" && e.signals.is_null()) bad.push_back("signals: required when phase is 'threat'");
  if (!bad.empty()) throw SchemaError(std::move(bad));
  return e;
}

json CriticalEvent::to_json() const {
  json m = json::object();
  for (const auto& [name, x] : measurements) m[name] = {{"value", x.value}, {"unit", x.unit}};
  return {{"id", id},       {"category", category},   {"subtype", subtype}, {"phase", phase},
          {"timestamp", timestamp}, {"title", title}, {"narrative", narrative}, {"tags", tags},
          {"assets", assets}, {"measurements", m},     {"signals", signals}};
}

void load_sources(const std::vector<std::filesystem::path>& paths, core::KnowledgeBase& kb, core::FactStore& store) {
  for (const auto& p : paths) {
    std::string text = core::read_file(p);
    if (p.extension() == ".kb") {
      auto r = lang::parse_kb(text, p.string());
      if (!r.ok()) throw ParseError(r.first_error(), r.diagnostics.front().span.start_line, r.diagnostics.front().span.start_column);
      kb.append(r.kb);
      store.merge(r.store);
      if (kb.metadata.name.empty()) kb.metadata = r.kb.metadata;
    } else {
      store.merge(core::parse_store(text, p.string()));
    }
  }
}

PackageSet PackageSet::load(const std::filesystem::path& manifest) {
  json j;
  try {
    j = json::parse(core::read_file(manifest));
  } catch (const json::exception& e) {
    throw Error(manifest.string() + ": " + e.what());
  }
  PackageSet set;
  set.config = ScenarioConfig::from_json(j.value("config", json()));
  if (!j.contains("packages") || !j["packages"].is_object()) throw Error(manifest.string() + ": 'packages' object required");
  auto dir = manifest.parent_path();
  for (const auto& [name, spec] : j["packages"].items()) {
    Package p;
    p.name = name;
    p.goal = spec.at("goal").get<std::string>();
    p.categories = spec.value("categories", std::vector<std::string>{});
    for (const auto& f : spec.at("files")) p.files.push_back(dir / f.get<std::string>());
    load_sources(p.files, p.kb, p.data);
    set.add(std::move(p));
  }
  return set;
}

void PackageSet::add(Package package) {
  auto name = package.name;
  if (!packages_.emplace(name, std::move(package)).second) throw Error("duplicate package '" + name + "'");
}

const Package& PackageSet::get(const std::string& name) const {
  auto it = packages_.find(name);
  if (it == packages_.end()) throw Error("no KB package '" + name + "'");
  return it->second;
}

const Package& PackageSet::for_category(const std::string& category) const {
  for (const auto& [name, p] : packages_)
    if (std::find(p.categories.begin(), p.categories.end(), category) != p.categories.end()) return p;
  throw Error("no KB package for category '" + category + "'");
}

std::vector<std::string> PackageSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, p] : packages_) out.push_back(name);
  return out;
}

std::string package_goal(const Package& package) { return package.goal; }

// ---------------------------------------------------------------------------

struct RunState {
  const Package* package = nullptr;
  CriticalEvent event;
  ScenarioConfig config;
  core::FactStore* store = nullptr;
  const inference::BuiltinRegistry* registry = nullptr;
  json sections = json::object();
  std::optional<RestorationPlan> plan;
  std::optional<ConsequenceReport> consequences;
  std::set<std::string> missing;

  template <class T>
  void set_member(CallContext& ctx, T& member, T value) {
    T old = std::move(member);
    member = std::move(value);
    ctx.on_undo([&member, old]() mutable { member = std::move(old); });
  }
  void set(CallContext& ctx, const std::string& key, json value) {
    json old = sections[key];
    sections[key] = std::move(value);
    ctx.on_undo([this, key, old] { sections[key] = old; });
  }
  void set_in(CallContext& ctx, const std::string& key, const std::string& sub, json value) {
    json old = sections[key];
    if (!sections[key].is_object()) sections[key] = json::object();
    sections[key][sub] = std::move(value);
    ctx.on_undo([this, key, old] { sections[key] = old; });
  }
  void push(CallContext& ctx, const std::string& key, json value) {
    sections[key].push_back(std::move(value));
    ctx.on_undo([this, key] { sections[key].erase(sections[key].size() - 1); });
  }
  void warn(CallContext& ctx, const std::string& text) { push(ctx, "warnings", text); }
  void propose(CallContext& ctx, const std::string& kind, const std::string& text, std::vector<std::string> evidence) {
    evidence.insert(evidence.begin(), "node:" + std::to_string(ctx.node()));
    push(ctx, "propositions", {{"kind", kind}, {"description", text}, {"evidence", evidence}});
  }
};

namespace {

std::string text_of(const Term& t) {
  if (t.is_number()) return core::format_number(t.number());
  if (t.is_symbol() || t.is_text()) return t.name();
  return core::to_string(t);
}

double number_of(const Term& t, const std::string& what) {
  if (!t.is_number()) throw Error(what + ": expected a number, got " + core::to_string(t));
  return t.number();
}

/// Ground rows of name/arity: knowledge-base facts first, then the store.
std::vector<std::vector<Term>> rows(CallContext& ctx, const std::string& name, std::size_t arity) {
  std::vector<std::vector<Term>> out;
  for (auto idx : ctx.kb().clauses_for(name, arity)) {
    const auto& c = ctx.kb().clauses()[idx];
    if (c.body.empty() && c.head.is_ground()) out.push_back(c.head.args);
  }
  for (const auto& f : ctx.store().relation(name))
    if (f.arity() == arity) out.push_back(f.args);
  return out;
}

/// Volumes in proposition text, rounded to two decimals.
std::string volume_text(const std::vector<double>& volumes) {
  std::string out;
  for (double v : volumes) out += " " + core::format_number(std::round(v * 100.0) / 100.0);
  return out;
}

std::optional<double> single_number(CallContext& ctx, const std::string& name) {
  auto r = rows(ctx, name, 1);
  if (r.empty()) return std::nullopt;
  return number_of(r[0][0], name);
}

std::optional<std::string> single_name(CallContext& ctx, const std::string& name) {
  auto r = rows(ctx, name, 1);
  if (r.empty()) return std::nullopt;
  return text_of(r[0][0]);
}

const core::NumericTable& need_table(CallContext& ctx, const std::string& name) {
  const auto* t = ctx.store().table(name);
  if (!t) throw Error("missing data table '" + name + "'");
  return *t;
}

double column(const core::NumericTable& t, const core::TableRow& row, const std::string& col) {
  auto i = t.value_index(col);
  if (!i) throw Error("table column '" + col + "' missing");
  return row.values[*i];
}

/// Regression over table columns `y` and every other value column.
prediction::RegressionFit fit_table(const core::NumericTable& t, std::vector<std::string>* inputs = nullptr) {
  auto y = t.value_index("y");
  if (!y) throw Error("regression table needs a 'y' column");
  std::vector<prediction::Sample> samples;
  for (const auto& row : t.rows) {
    prediction::Sample s;
    for (std::size_t j = 0; j < row.values.size(); ++j)
      if (j != *y) s.inputs.push_back(row.values[j]);
    s.y = row.values[*y];
    samples.push_back(std::move(s));
  }
  if (inputs)
    for (std::size_t j = 0; j + 1 < t.columns.size(); ++j)
      if (j != *y) inputs->push_back(t.columns[j + 1]);
  return prediction::fit_regression(samples);
}

std::vector<MeasureTemplate> measure_templates(CallContext& ctx, const std::string& currency) {
  std::vector<MeasureTemplate> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows(ctx, "measure", 3)) {
    MeasureTemplate m;
    m.id = text_of(r[0]);
    m.description = text_of(r[1]);
    m.duration_days = number_of(r[2], "measure duration");
    m.expenses.currency = currency;
    index[m.id] = out.size();
    out.push_back(std::move(m));
  }
  auto find = [&](const Term& id, const std::string& what) -> MeasureTemplate& {
    auto it = index.find(text_of(id));
    if (it == index.end()) throw Error(what + " refers to unknown measure '" + text_of(id) + "'");
    return out[it->second];
  };
  for (const auto& r : rows(ctx, "measure_tag", 2)) find(r[0], "measure_tag").tags.push_back(text_of(r[1]));
  for (const auto& r : rows(ctx, "requires", 2)) find(r[0], "requires").prerequisites.push_back(text_of(r[1]));
  for (const auto& r : rows(ctx, "expense", 4))
    find(r[0], "expense")
        .expenses.lines.push_back({text_of(r[1]), number_of(r[2], "expense quantity"),
                                   Money::from_double(number_of(r[3], "expense unit cost"), currency)});
  return out;
}

std::vector<std::string> event_tags(const RunState& rs) {
  std::vector<std::string> out;
  for (const auto& t : rs.event.tags) out.push_back(tag_symbol(t));
  return out;
}

json plan_json(const RestorationPlan& plan) {
  json out = json::array();
  for (const auto& m : plan.measures)
    out.push_back({{"id", m.measure.id},
                   {"description", m.measure.description},
                   {"prerequisites", m.prerequisites},
                   {"duration_days", m.measure.duration_days},
                   {"start_day", m.start_day},
                   {"end_day", m.end_day},
                   {"expenses", m.measure.expenses.to_json()}});
  return out;
}

ExpenseSheet plan_expenses(const RestorationPlan& plan, const std::string& currency) {
  std::vector<ExpenseSheet> sheets;
  std::vector<std::string> labels;
  for (const auto& m : plan.measures) {
    sheets.push_back(m.measure.expenses);
    labels.push_back(m.measure.id);
  }
  return sum_expense_sheets(sheets, labels, currency);
}

ConsequenceInputs consequence_inputs(CallContext& ctx, const RunState& rs) {
  ConsequenceInputs in;
  in.currency = rs.config.currency;
  std::set<std::string> affected(rs.event.assets.begin(), rs.event.assets.end());
  std::map<std::string, std::vector<std::string>> needs;
  for (const auto& r : rows(ctx, "asset_requires", 2)) needs[text_of(r[0])].push_back(text_of(r[1]));
  for (const auto& r : rows(ctx, "asset_output", 3)) {
    std::string asset = text_of(r[0]);
    if (!affected.empty() && !affected.count(asset)) continue;
    in.assets.push_back({asset, text_of(r[1]), number_of(r[2], "asset daily output"), needs[asset]});
  }
  for (const auto& r : rows(ctx, "price", 2))
    in.prices.emplace(text_of(r[0]), Money::from_double(number_of(r[1], "price"), in.currency));
  for (const auto& r : rows(ctx, "contract", 4))
    in.contracts.push_back({text_of(r[0]), text_of(r[1]), number_of(r[2], "contract slack"),
                            Money::from_double(number_of(r[3], "contract penalty"), in.currency)});
  auto credit = rows(ctx, "credit_terms", 3);
  if (!credit.empty())
    in.credit = CreditTerms{Money::from_double(number_of(credit[0][0], "liquidity"), in.currency),
                            number_of(credit[0][1], "credit rate"), number_of(credit[0][2], "credit term")};
  return in;
}

json consequence_json(const ConsequenceReport& c, const std::string& basis, double probability) {
  json j = c.to_json();
  j["basis"] = basis;
  j["probability"] = probability;
  j["expected_total"] = c.total.times(probability).to_json();
  return j;
}

/// Planned volumes per product from plan_volume(Product, Period, Volume).
std::map<std::string, std::vector<double>> planned_volumes(CallContext& ctx) {
  std::map<std::string, std::map<int, double>> by;
  for (const auto& r : rows(ctx, "plan_volume", 3))
    by[text_of(r[0])][static_cast<int>(number_of(r[1], "plan period"))] += number_of(r[2], "plan volume");
  std::map<std::string, std::vector<double>> out;
  for (const auto& [product, periods] : by)
    for (const auto& [k, v] : periods) out[product].push_back(v);
  return out;
}

}  // namespace

inference::BuiltinRegistry scenario_registry(RunState& rs) {
  inference::BuiltinRegistry r;
  using Args = std::vector<Term>;

  r.add({"measured", 2, "+?", [&rs](const Args& a, CallContext&) {
           std::string name = text_of(a[0]);
           auto it = rs.event.measurements.find(name);
           if (it == rs.event.measurements.end()) {
             rs.missing.insert(name);
             return Answers{};
           }
           return Answers{{a[0], Term::number(it->second.value)}};
         }});

  // Production: threat branch.
  r.add({"assess_threat", 2, "??", [&rs](const Args&, CallContext& ctx) {
           const json& s = rs.event.signals;
           if (!s.is_object()) throw Error("event has no threat signals");
           std::string method = s.value("method", "");
           std::string target = s.value("target", "emergency");
           ThreatAssessment t;
           if (method == "bayes") {
             decision::BayesInput in;
             in.hypotheses = s.value("hypotheses", std::vector<std::string>{});
             in.priors = s.at("priors").get<std::vector<double>>();
             in.likelihoods = s.at("likelihoods").get<std::vector<double>>();
             std::size_t idx = 0;
             if (!in.hypotheses.empty()) {
               auto it = std::find(in.hypotheses.begin(), in.hypotheses.end(), target);
               if (it == in.hypotheses.end()) throw Error("signals: target '" + target + "' is not a hypothesis");
               idx = static_cast<std::size_t>(it - in.hypotheses.begin());
             }
             t = assess_threat_bayes(in, idx, rs.config);
           } else if (method == "event-tree") {
             decision::EventTree tree;
             std::set<std::string> children;
             std::vector<std::string> parents;
             for (const auto& b : s.at("branches")) {
               auto node = b.at("node").get<std::string>();
               if (!tree.branches.count(node)) parents.push_back(node);
               tree.branches[node].push_back({b.at("child").get<std::string>(), b.at("probability").get<double>()});
               children.insert(b.at("child").get<std::string>());
             }
             for (const auto& [leaf, cls] : s.at("outcomes").items()) tree.outcomes[leaf] = cls.get<std::string>();
             tree.root = s.value("root", "");
             if (tree.root.empty())
               for (const auto& p : parents)
                 if (!children.count(p)) tree.root = p;
             t = assess_threat_tree(tree, target, rs.config);
           } else {
             throw Error("signals: method must be 'bayes' or 'event-tree'");
           }
           rs.set(ctx, "branch", "threat");
           rs.set(ctx, "threat",
                  {{"method", t.method}, {"target", target}, {"probability", t.probability}, {"level", threat_level_name(t.level)}});
           return Answers{{Term::number(t.probability), Term::symbol(threat_level_name(t.level))}};
         }});

  r.add({"estimate_threat_consequences", 0, "", [&rs](const Args&, CallContext& ctx) {
           double p = rs.sections["threat"].value("probability", 0.0);
           auto plan = plan_restoration(measure_templates(ctx, rs.config.currency), event_tags(rs));
           Money cost = plan_expenses(plan, rs.config.currency).total();
           auto c = assess_consequences(plan, cost, consequence_inputs(ctx, rs));
           json j = consequence_json(c, "threat", p);
           j["restoration_cost"] = cost.to_json();
           j["hypothetical_measures"] = plan.measures.size();
           rs.set(ctx, "consequences", j);
           return Answers{{}};
         }});

  r.add({"propose_preventive", 0, "", [&rs](const Args&, CallContext& ctx) {
           std::size_t n = 0;
           std::string level = rs.sections["threat"].value("level", "");
           for (const auto& row : rows(ctx, "preventive_level", 2))
             if (text_of(row[0]) == level) rs.propose(ctx, "other", text_of(row[1]), {"report:threat"}), ++n;
           auto tags = event_tags(rs);
           for (const auto& row : rows(ctx, "preventive", 2))
             if (std::find(tags.begin(), tags.end(), text_of(row[0])) != tags.end())
               rs.propose(ctx, "other", text_of(row[1]), {"report:threat", "tag:" + text_of(row[0])}), ++n;
           if (n == 0) rs.warn(ctx, "no preventive measure template matches the threat");
           return Answers{{}};
         }});

  // Production: actual event branch.
  r.add({"describe_event", 0, "", [&rs](const Args&, CallContext& ctx) {
           json m = json::array();
           for (const auto& [name, x] : rs.event.measurements) m.push_back(name);
           rs.set(ctx, "branch", "event");
           rs.set(ctx, "event_analysis",
                  {{"title", rs.event.title},
                   {"narrative", rs.event.narrative},
                   {"damage_tags", event_tags(rs)},
                   {"assets", rs.event.assets},
                   {"measurements", m}});
           return Answers{{}};
         }});

  r.add({"plan_restoration", 0, "", [&rs](const Args&, CallContext& ctx) {
           auto plan = plan_restoration(measure_templates(ctx, rs.config.currency), event_tags(rs));
           for (const auto& w : plan.warnings) rs.warn(ctx, w);
           auto agg = plan_expenses(plan, rs.config.currency);
           rs.set(ctx, "measures", plan_json(plan));
           json sheets = json::array();
           for (const auto& l : agg.lines) sheets.push_back({{"measure", l.label}, {"total", l.total().to_json()}});
           rs.set(ctx, "expenses", {{"currency", agg.currency}, {"sheets", sheets}, {"total", agg.total().to_json()}});
           rs.set_member(ctx, rs.plan, std::optional<RestorationPlan>(plan));
           return Answers{{}};
         }});

  r.add({"analyze_causes", 0, "", [&rs](const Args&, CallContext& ctx) {
           std::vector<std::string> versions;
           for (auto idx : ctx.kb().clauses_for("version", 1)) {
             const auto& h = ctx.kb().clauses()[idx].head;
             if (!h.args[0].is_ground()) continue;
             auto v = text_of(h.args[0]);
             if (std::find(versions.begin(), versions.end(), v) == versions.end()) versions.push_back(v);
           }
           json causes = json::array();
           std::size_t confirmed = 0;
           for (const auto& v : versions) {
             rs.missing.clear();
             core::Atom goal{"version", {core::is_identifier(v) ? Term::symbol(v) : Term::text(v)}};
             inference::Limits lim;
             lim.max_solutions = 1;
             inference::Solver sub(ctx.kb(), ctx.store(), *rs.registry, goal, lim);
             auto st = sub.next();
             if (st == inference::Solver::State::Suspended) throw Error("cause version '" + v + "' asks the operator");
             std::string status = st == inference::Solver::State::Solution ? "confirmed"
                                  : rs.missing.empty()                   ? "rejected"
                                                                         : "undeterminable";
             json c{{"version", v}, {"status", status}, {"missing_measurements", rs.missing}};
             c["trace"] = st == inference::Solver::State::Solution ? sub.solution().tree.to_json() : sub.failure_tree().to_json();
             confirmed += status == "confirmed";
             causes.push_back(std::move(c));
           }
           rs.set(ctx, "causes", causes);
           if (confirmed == 0) rs.warn(ctx, "no cause version is confirmed");
           return Answers{{}};
         }});

  r.add({"assess_consequences", 0, "", [&rs](const Args&, CallContext& ctx) {
           if (!rs.plan) throw Error("consequences need the restoration plan first");
           Money cost = plan_expenses(*rs.plan, rs.config.currency).total();
           auto c = assess_consequences(*rs.plan, cost, consequence_inputs(ctx, rs));
           json j = consequence_json(c, "event", 1.0);
           j["restoration_cost"] = cost.to_json();
           j["hypothetical_measures"] = 0;
           rs.set(ctx, "consequences", j);
           rs.set_member(ctx, rs.consequences, std::optional<ConsequenceReport>(c));
           return Answers{{}};
         }});

  r.add({"correct_plans", 0, "", [&rs](const Args&, CallContext& ctx) {
           if (!rs.consequences) throw Error("plan correction needs the consequence report first");
           double period = single_number(ctx, "period_days").value_or(30.0);
           auto downtime = rs.consequences->product_downtime();
           std::map<std::string, double> capacity;
           for (const auto& row : rows(ctx, "asset_output", 3)) capacity[text_of(row[1])] += number_of(row[2], "asset daily output");
           json products = json::array();
           for (const auto& [product, volumes] : planned_volumes(ctx)) {
             double down = downtime.count(product) ? downtime[product] : 0.0;
             // Each stopped asset removes its share of capacity for its own downtime.
             auto revised = volumes;
             double share = 0.0;
             for (const auto& l : rs.consequences->lost_output) {
               if (l.product != product || capacity[product] <= 0) continue;
               double s = l.volume / l.downtime_days / capacity[product];
               share += s;
               auto cut = correct_plan(volumes, period, l.downtime_days, s);
               for (std::size_t k = 0; k < revised.size(); ++k) revised[k] -= volumes[k] - cut[k];
             }
             for (auto& v : revised) v = std::max(0.0, v);
             products.push_back({{"product", product},
                                 {"downtime_days", down},
                                 {"capacity_share", share},
                                 {"original", volumes},
                                 {"revised", revised}});
             if (revised != volumes) {
               rs.propose(ctx, "plan-correction", "reduce planned " + product + " volumes to" + volume_text(revised),
                          {"report:consequences"});
             }
           }
           if (products.empty()) rs.warn(ctx, "no production/sales plan to correct");
           rs.set(ctx, "plan_correction", {{"period_days", period}, {"products", products}});
           return Answers{{}};
         }});

  r.add({"propose_reliability", 0, "", [&rs](const Args&, CallContext& ctx) {
           for (const auto& c : rs.sections["causes"]) {
             if (c["status"] != "confirmed") continue;
             std::string v = c["version"];
             for (const auto& row : rows(ctx, "reliability_template", 2))
               if (text_of(row[0]) == v) rs.propose(ctx, "reliability-improvement", text_of(row[1]), {"cause:" + v});
           }
           return Answers{{}};
         }});

  // Market package.
  r.add({"assess_consumer_value", 2, "??", [&rs](const Args&, CallContext& ctx) {
           std::vector<std::string> inputs;
           auto fit = fit_table(need_table(ctx, "consumer_value"), &inputs);
           const auto& goods = need_table(ctx, "goods");
           auto value_of = [&](const std::string& label) {
             const auto* row = goods.find_row(label);
             if (!row) throw Error("table 'goods' has no row '" + label + "'");
             std::vector<double> x;
             for (const auto& in : inputs) x.push_back(column(goods, *row, in));
             return prediction::predict_regression(fit.model, x).value;
           };
           double c = value_of("competitor"), o = value_of("own");
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "market", "consumer_value",
                     {{"competitor", c}, {"own", o}, {"attributes", inputs}, {"r_squared", fit.diagnostics.r_squared}});
           return Answers{{Term::number(c), Term::number(o)}};
         }});

  r.add({"assess_sales_influence", 3, "++?", [&rs](const Args& a, CallContext& ctx) {
           auto fit = fit_table(need_table(ctx, "sales_response"));
           double gap = number_of(a[0], "competitor value") - number_of(a[1], "own value");
           double change = prediction::predict_regression(fit.model, std::vector<double>{gap}).value;
           rs.set_in(ctx, "market", "sales_influence",
                     {{"value_gap", gap}, {"relative_change", change}, {"r_squared", fit.diagnostics.r_squared}});
           return Answers{{a[0], a[1], Term::number(change)}};
         }});

  r.add({"prepare_plan_information", 2, "++", [&rs](const Args& a, CallContext& ctx) {
           std::string kind = text_of(a[0]);
           double value = number_of(a[1], "plan change");
           if (kind != "relative" && kind != "absolute") throw Error("plan information kind must be relative or absolute");
           json products = json::array();
           for (const auto& [product, volumes] : planned_volumes(ctx)) {
             std::vector<double> revised;
             for (double v : volumes) revised.push_back(std::max(0.0, kind == "relative" ? v * (1.0 + value) : v + value));
             products.push_back({{"product", product}, {"original", volumes}, {"revised", revised}});
             rs.propose(ctx, "plan-correction", "revise planned " + product + " volumes to" + volume_text(revised),
                        {"report:market"});
           }
           if (products.empty()) rs.warn(ctx, "no production/sales plan to revise");
           rs.set_in(ctx, "market", "plan_info", {{"basis", kind}, {"change", value}, {"products", products}});
           return Answers{a};
         }});

  r.add({"propose_new_technology", 2, "++", [&rs](const Args& a, CallContext& ctx) {
           double c = number_of(a[0], "competitor value"), o = number_of(a[1], "own value");
           bool fire = c > rs.config.new_technology_factor * o;
           rs.set_in(ctx, "market", "new_technology",
                     {{"competitor", c}, {"own", o}, {"factor", rs.config.new_technology_factor}, {"triggered", fire}});
           if (fire) {
             auto text = single_name(ctx, "new_technology_template")
                             .value_or("assess adopting the technology of the competing goods");
             rs.propose(ctx, "new-technology", text, {"report:market.consumer_value"});
           }
           return Answers{a};
         }});

  r.add({"analyze_segment", 1, "?", [&rs](const Args&, CallContext& ctx) {
           const auto& t = need_table(ctx, "segment_criteria");
           std::vector<double> w, s;
           json criteria = json::array();
           for (const auto& row : t.rows) {
             w.push_back(column(t, row, "weight"));
             s.push_back(column(t, row, "score"));
             criteria.push_back({{"criterion", row.label}, {"weight", w.back()}, {"score", s.back()}});
           }
           double score = weighted_score(w, s);
           double wsum = 0.0;
           for (double x : w) wsum += x;
           if (wsum == 0.0) rs.warn(ctx, "segment criteria weights sum to zero; score set to 0");
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "market", "segment_analysis", {{"criteria", criteria}, {"score", score}});
           return Answers{{Term::number(score)}};
         }});

  r.add({"estimate_segment_sales", 2, "+?", [&rs](const Args& a, CallContext& ctx) {
           auto fit = fit_table(need_table(ctx, "segment_sales"));
           double score = number_of(a[0], "segment score");
           double v = prediction::predict_regression(fit.model, std::vector<double>{score}).value;
           rs.set_in(ctx, "market", "sales_volume", {{"score", score}, {"volume", v}, {"r_squared", fit.diagnostics.r_squared}});
           return Answers{{a[0], Term::number(v)}};
         }});

  r.add({"assess_financial_state", 2, "??", [&rs](const Args&, CallContext& ctx) {
           const auto& t = need_table(ctx, "partner_ratios");
           if (t.rows.empty()) throw Error("table 'partner_ratios' is empty");
           decision::FinancialProfile p;
           for (int i = 0; i < 5; ++i) p.ratios[i] = column(t, t.rows[0], "x" + std::to_string(i + 1));
           auto z = decision::altman_z(p, rs.config.altman);
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "market", "financial_state",
                     {{"partner", t.rows[0].label},
                      {"ratios", std::vector<double>(p.ratios.begin(), p.ratios.end())},
                      {"z", z.z},
                      {"zone", decision::zone_name(z.zone)}});
           return Answers{{Term::number(z.z), Term::symbol(decision::zone_name(z.zone))}};
         }});

  r.add({"assess_partner_consequences", 1, "+", [&rs](const Args& a, CallContext& ctx) {
           std::string zone = text_of(a[0]);
           json j{{"zone", zone}};
           if (zone == "safe") {
             j["branch"] = "no-action";
             j["decision"] = nullptr;
           } else {
             std::string table = single_name(ctx, "partner_response_table").value_or("partner_response");
             auto crit = decision::parse_criterion(single_name(ctx, "decision_criterion").value_or("pessimistic"));
             const auto& t = need_table(ctx, table);
             decision::DecisionTable d;
             d.situations.assign(t.columns.begin() + 1, t.columns.end());
             for (const auto& row : t.rows) {
               if (row.label == "P") {
                 d.probabilities = row.values;
                 continue;
               }
               d.variants.push_back(row.label);
               d.values.push_back(row.values);
             }
             auto res = decision::choose(d, crit);
             json dec{{"table", table},
                      {"criterion", decision::criterion_name(crit)},
                      {"variants", d.variants},
                      {"values", res.per_variant},
                      {"chosen", d.variants[res.variant]},
                      {"value", res.value}};
             j["branch"] = "respond";
             j["decision"] = dec;
             rs.push(ctx, "decisions", dec);
           }
           rs.set_in(ctx, "market", "consequences", j);
           return Answers{a};
         }});

  r.add({"propose_other", 1, "+", [&rs](const Args& a, CallContext& ctx) {
           json texts = json::array();
           for (const auto& row : rows(ctx, "partner_proposition", 2))
             if (text_of(row[0]) == text_of(a[0])) {
               texts.push_back(text_of(row[1]));
               rs.propose(ctx, "other", text_of(row[1]), {"report:market.financial_state"});
             }
           rs.set_in(ctx, "market", "other_propositions", texts);
           return Answers{a};
         }});

  // Region package.
  r.add({"predict_exchange_rate", 1, "?", [&rs](const Args&, CallContext& ctx) {
           const auto& t = need_table(ctx, "fx_rate");
           std::vector<double> history;
           for (const auto& row : t.rows) history.push_back(column(t, row, "y"));
           int order = static_cast<int>(single_number(ctx, "fx_order").value_or(1));
           auto horizon = static_cast<std::size_t>(single_number(ctx, "fx_horizon").value_or(3));
           auto fit = prediction::fit_dynamical(history, {}, order);
           auto forecast = prediction::simulate_dynamical(fit.model, history, prediction::ExogenousScenario{}, horizon);
           double base = history.back();
           double rate = forecast.empty() ? base : forecast.back();
           if (base == 0.0) throw Error("exchange-rate series ends at zero");
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "region", "prediction",
                     {{"order", order},
                      {"coefficients", fit.model.a},
                      {"horizon", horizon},
                      {"forecast", forecast},
                      {"base_rate", base},
                      {"forecast_rate", rate},
                      {"ratio", rate / base}});
           return Answers{{Term::number(rate / base)}};
         }});

  r.add({"announced_change", 2, "+?", [&rs](const Args& a, CallContext& ctx) {
           std::string kind = text_of(a[0]);
           std::string name = kind + "_change";
           auto it = rs.event.measurements.find(name);
           if (it == rs.event.measurements.end()) throw Error("event needs measurement '" + name + "'");
           double factor = 1.0 + it->second.value;
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "region", "announced_change",
                     {{"kind", kind}, {"measurement", name}, {"relative_change", it->second.value}, {"factor", factor}});
           return Answers{{a[0], Term::number(factor)}};
         }});

  r.add({"assess_profitability", 2, "++", [&rs](const Args& a, CallContext& ctx) {
           std::string kind = text_of(a[0]);
           double f = number_of(a[1], "cost factor");
           CostShock shock;
           if (kind == "fx" || kind == "customs")
             shock.imported = f;
           else if (kind == "tax")
             shock.overall = f;
           else if (kind == "energy")
             shock.energy = f;
           else
             throw Error("unknown cost change '" + kind + "'");
           std::vector<CostStructure> products;
           if (const auto* t = ctx.store().table("cost_structure")) {
             for (const auto& row : t->rows) {
               try {
                 products.push_back({row.label, column(*t, row, "components"), column(*t, row, "materials"),
                                     column(*t, row, "labour"), column(*t, row, "energy"), column(*t, row, "logistics"),
                                     column(*t, row, "imported"), column(*t, row, "price")});
               } catch (const Error& e) {
                 rs.warn(ctx, "product '" + row.label + "' skipped: " + e.what());
               }
             }
           } else {
             rs.warn(ctx, "no cost structure table; profitability not assessed");
           }
           json rows_json = json::array(), unprofitable = json::array();
           for (const auto& p : find_unprofitable(products, shock)) {
             rows_json.push_back({{"product", p.product},
                                  {"old_unit_cost", p.old_cost},
                                  {"new_unit_cost", p.new_cost},
                                  {"price", p.price},
                                  {"unprofitable", p.unprofitable}});
             if (p.unprofitable) {
               unprofitable.push_back(p.product);
               rs.propose(ctx, "other", "review price or sourcing of unprofitable product " + p.product,
                          {"report:region.consequences"});
             }
           }
           rs.set_in(ctx, "region", "consequences",
                     {{"change", kind}, {"factor", f}, {"products", rows_json}, {"unprofitable", unprofitable}});
           return Answers{a};
         }});

  r.add({"assess_political_consequences", 0, "", [&rs](const Args&, CallContext& ctx) {
           json texts = json::array();
           for (const auto& row : rows(ctx, "political_consequence", 1)) {
             texts.push_back(text_of(row[0]));
             rs.propose(ctx, "other", text_of(row[0]), {"report:region.consequences"});
           }
           rs.set(ctx, "branch", rs.event.subtype);
           rs.set_in(ctx, "region", "consequences", {{"change", "political"}, {"qualitative", texts}, {"quantified", false}});
           return Answers{{}};
         }});
  return r;
}

// ---------------------------------------------------------------------------

std::string state_name(ScenarioRun::State s) {
  switch (s) {
    case ScenarioRun::State::Running: return "running";
    case ScenarioRun::State::AwaitingAnswer: return "awaiting-answer";
    case ScenarioRun::State::Done: return "done";
    case ScenarioRun::State::Failed: return "failed";
  }
  return "";
}

struct ScenarioRun::Impl {
  const Package& package;
  RunState rs;
  core::FactStore store;
  inference::BuiltinRegistry registry;
  std::unique_ptr<inference::Solver> solver;
  json report;
  json trace;

  Impl(const Package& p) : package(p) {}
};

namespace {

json empty_sections() {
  return {{"branch", nullptr},        {"threat", nullptr},       {"event_analysis", nullptr}, {"measures", json::array()},
          {"expenses", nullptr},      {"causes", json::array()}, {"consequences", nullptr},   {"plan_correction", nullptr},
          {"propositions", json::array()}, {"decisions", json::array()}, {"market", nullptr}, {"region", nullptr},
          {"warnings", json::array()}};
}

}  // namespace

ScenarioRun::ScenarioRun(const Package& package, CriticalEvent event, ScenarioConfig config, core::FactStore extra)
    : impl_(std::make_unique<Impl>(package)) {
  auto& m = *impl_;
  m.store = package.data;
  m.store.merge(extra);
  auto sym = [](const std::string& s) { return Term::symbol(tag_symbol(s)); };
  m.store.assert_fact({"event_category", {sym(event.category)}});
  m.store.assert_fact({"event_subtype", {sym(event.subtype)}});
  m.store.assert_fact({"event_phase", {sym(event.phase)}});
  for (const auto& t : event.tags) m.store.assert_fact({"damage", {sym(t)}});
  for (const auto& a : event.assets) m.store.assert_fact({"affected", {core::is_identifier(a) ? Term::symbol(a) : Term::text(a)}});
  m.rs.package = &package;
  m.rs.event = std::move(event);
  m.rs.config = std::move(config);
  m.rs.store = &m.store;
  m.rs.sections = empty_sections();
  m.registry = inference::standard_registry();
  auto extra_builtins = scenario_registry(m.rs);
  for (const auto& [name, arity] : extra_builtins.names()) m.registry.add(*extra_builtins.find(name, arity));
  m.rs.registry = &m.registry;
  m.solver = std::make_unique<inference::Solver>(package.kb, m.store, m.registry, core::Atom{package.goal, {}},
                                                 inference::Limits{10000, 1});
}

ScenarioRun::~ScenarioRun() = default;

ScenarioRun::State ScenarioRun::advance() {
  if (state_ == State::Done || state_ == State::Failed) return state_;
  if (state_ == State::AwaitingAnswer) throw Error("scenario is awaiting an answer");
  auto& m = *impl_;
  try {
    auto st = m.solver->next();
    if (st == inference::Solver::State::Suspended) return state_ = State::AwaitingAnswer;
    if (st == inference::Solver::State::Solution) {
      m.trace = m.solver->solution().tree.to_json();
      json r = m.rs.sections;
      r["schema_version"] = kReportSchemaVersion;
      r["package"] = m.package.name;
      r["goal"] = m.package.goal;
      r["event"] = m.rs.event.to_json();
      r["goal_tree"] = m.trace;
      m.report = std::move(r);
      return state_ = State::Done;
    }
    m.trace = m.solver->failure_tree().to_json();
    error_ = "goal " + m.package.goal + " has no proof for event " + m.rs.event.id;
    return state_ = State::Failed;
  } catch (const inference::InferenceError& e) {
    m.trace = e.tree().to_json();
    error_ = e.what();
    return state_ = State::Failed;
  }
}

const std::optional<inference::Question>& ScenarioRun::pending_question() const {
  return impl_->solver->pending_question();
}

void ScenarioRun::provide_answer(std::size_t question_id, inference::AnswerValue answer) {
  if (state_ != State::AwaitingAnswer) throw Error("not awaiting an answer");
  impl_->solver->provide_answer(question_id, answer);
  state_ = State::Running;
}

const std::vector<std::pair<inference::Question, inference::AnswerValue>>& ScenarioRun::answer_log() const {
  return impl_->solver->answer_log();
}

const json& ScenarioRun::report() const {
  if (state_ != State::Done) throw Error("report is available once the scenario is done");
  return impl_->report;
}

json ScenarioRun::trace() const { return impl_->trace; }

}  // namespace ace::scenarios
