// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ace/decision/decision.hpp"
#include "ace/diagnostics/classifiers.hpp"
#include "ace/inference/solver.hpp"
#include "ace/lang/parser.hpp"
#include "ace/prediction/prediction.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace ace;
using nlohmann::json;

namespace {

// Tolerances and budgets.
constexpr double kClassifierSeconds = 5.0;
constexpr double kLeastSquaresSeconds = 5.0;
constexpr double kEndToEndSeconds = 10.0;
constexpr double kCoefficientTolerance = 1e-6;
constexpr double kPosteriorSumTolerance = 1e-12;
constexpr double kPotentialFloor = 1e-3;
constexpr std::size_t kSegments = 100;

class Check {
 public:
  void need(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
    ++checks_;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }
  std::size_t checks() const { return checks_; }

 private:
  std::string failure_;
  std::size_t checks_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

diagnostics::LogicVector random_vector(std::mt19937& rng, std::size_t n) {
  std::vector<int> v(n);
  for (auto& x : v) x = static_cast<int>(rng() % 3) - 1;
  return diagnostics::LogicVector(v);
}

// ---------------------------------------------------------------------------

void classifiers(Check& c) {
  using namespace diagnostics;
  auto t0 = std::chrono::steady_clock::now();

  ExperienceTable two(1);
  two.add({1}, 1);
  two.add({-1}, 2);
  auto plane = fit_separating_plane(two);
  c.need(std::abs(plane.coefficients[0]) < 1e-12 && std::abs(plane.coefficients[1] - 1.0) < 1e-12,
         "plane on {+1 -> 1, -1 -> 2} is not (0, 1)");

  // Plane coefficients against an independent QR solve of the same targets.
  std::mt19937 rng(101);
  for (int round = 0; round < 20; ++round) {
    ExperienceTable t(4);
    while (t.rows().size() < 24) t.add(random_vector(rng, 4), 1 + static_cast<int>(rng() % 2));
    t.add({1, 1, 1, 1}, 1);
    t.add({-1, -1, -1, -1}, 2);
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (const auto& r : t.rows()) {
      std::vector<double> row{1.0};
      for (int v : r.x.values()) row.push_back(v);
      a.push_back(row);
      b.push_back(r.label == 1 ? 1.0 : -1.0);
    }
    auto m = fit_separating_plane(t);
    if (m.metadata.ridge_fallback) continue;
    auto want = oracle::qr_least_squares(a, b);
    for (std::size_t j = 0; j < want.size(); ++j)
      c.need(std::abs(m.coefficients[j] - want[j]) < 1e-9, "plane differs from the QR oracle");
  }

  ExperienceTable xr(2);
  xr.add({1, 1}, 1);
  xr.add({-1, -1}, 1);
  xr.add({1, -1}, 2);
  xr.add({-1, 1}, 2);
  auto surface = fit_separating_surface(xr, 2, 1e-6);
  c.need(surface.coefficients.size() == 6, "degree-2 surface in two variables needs 6 coefficients");
  if (surface.coefficients.size() == 6) {
    const double lambda = 1e-8;
    const double want[] = {0, 0, 0, 0, 4.0 / (4.0 + lambda), 0};
    for (int j = 0; j < 6; ++j) c.need(std::abs(surface.coefficients[j] - want[j]) < 1e-7, "XOR surface coefficients");
  }
  for (const auto& r : xr.rows())
    c.need(classify_geometric(surface, r.x).class_index == r.label, "XOR surface misclassifies a training row");

  ExperienceTable f(1);
  f.add({1}, 1);
  f.add({1}, 1);
  f.add({-1}, 1);
  f.add({0}, 1);
  for (int i = 0; i < 4; ++i) f.add({1}, 2);
  auto freq = fit_frequencies(f);
  // Class 1: (2 + 1) / (4 + 2) = 0.5; class 2: (4 + 1) / (4 + 2) = 5/6, ln(5).
  c.need(std::abs(freq.frequencies[0][0] - 0.5) < 1e-15, "class-1 frequency is not 1/2");
  c.need(std::abs(freq.coefficients[0][0]) < 1e-15, "class-1 log-odds is not 0");
  c.need(std::abs(freq.frequencies[1][0] - 5.0 / 6.0) < 1e-15, "class-2 frequency is not 5/6");
  c.need(std::abs(freq.coefficients[1][0] - std::log(5.0)) < 1e-12, "class-2 log-odds is not ln 5");
  c.need(classify_frequencies(freq, {1}) == 2, "frequencies pick the wrong class for +1");

  auto pot = fit_potential(two, 0.01, 0.01);
  // 1/0.01 - 1/4 at the class-1 point.
  auto d = classify_potential(pot, {1});
  c.need(d.class_index == 1 && std::abs(d.scores[0] - 99.75) < 1e-12, "potential score at +1 is not 99.75");
  c.need(std::abs(classify_potential(pot, {-1}).scores[0] + 99.75) < 1e-12, "potential score at -1 is not -99.75");

  std::mt19937 prng(2026);
  for (int round = 0; round < 100; ++round) {
    ExperienceTable t(8);
    std::set<std::vector<int>> seen;
    while (t.rows().size() < 50) {
      auto x = random_vector(prng, 8);
      if (!seen.insert(x.values()).second) continue;
      t.add(x, 1 + static_cast<int>(prng() % 2));
    }
    auto m = fit_potential(t, kPotentialFloor);
    for (const auto& r : t.rows())
      c.need(classify_potential(m, r.x).class_index == r.label, "potential classifier is not training-consistent");
  }
  c.need(seconds_since(t0) < kClassifierSeconds, "classifier suite over its time budget");
}

// ---------------------------------------------------------------------------

void least_squares(Check& c) {
  using namespace prediction;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> coef(-2, 2), xs(-3, 3), u(-1, 1);
  double worst = 0;

  for (int round = 0; round < 100; ++round) {
    std::size_t inputs = 1 + round % 3;
    int degree = 1 + (round / 3) % 2;
    bool intercept = round % 5 != 0;
    RegressionModel truth{inputs, degree, intercept, {}, {}};
    std::size_t k = regression_features(truth, std::vector<double>(inputs, 0.0)).size();
    for (std::size_t j = 0; j < k; ++j) truth.coefficients.push_back(coef(rng));
    std::vector<Sample> samples;
    for (std::size_t i = 0; i < 3 * k + 2; ++i) {
      std::vector<double> in(inputs);
      for (auto& x : in) x = xs(rng);
      // Target from the monomials written out independently.
      double y = intercept ? truth.coefficients[0] : 0.0;
      std::size_t idx = intercept ? 1 : 0;
      for (std::size_t a = 0; a < inputs; ++a) y += truth.coefficients[idx++] * in[a];
      if (degree == 2)
        for (std::size_t a = 0; a < inputs; ++a)
          for (std::size_t b = a; b < inputs; ++b) y += truth.coefficients[idx++] * in[a] * in[b];
      samples.push_back({in, y});
    }
    auto fit = fit_regression(samples, degree, intercept);
    c.need(fit.model.coefficients.size() == k, "regression coefficient count");
    for (std::size_t j = 0; j < k && j < fit.model.coefficients.size(); ++j)
      worst = std::max(worst, std::abs(fit.model.coefficients[j] - truth.coefficients[j]));
  }

  for (int round = 0; round < 100; ++round) {
    int order = round % 3;
    std::size_t n = round % 3;
    bool intercept = round % 2 == 1;
    std::vector<double> a, b;
    for (int i = 0; i <= order; ++i) a.push_back(coef(rng) / (2.0 * (order + 1)));
    for (std::size_t j = 0; j < n; ++j) b.push_back(coef(rng));
    double c0 = intercept ? coef(rng) : 0.0;
    std::size_t length = 3 * (order + 1 + n + 1) + order + 2;
    std::vector<double> y;
    std::vector<std::vector<double>> v(n);
    for (int i = 0; i <= order; ++i) y.push_back(u(rng));
    for (auto& s : v)
      for (std::size_t t = 0; t < length; ++t) s.push_back(u(rng));
    while (y.size() < length) {
      std::size_t t = y.size() - 1;
      double next = c0;
      for (int i = 0; i <= order; ++i) next += a[i] * y[t - i];
      for (std::size_t j = 0; j < n; ++j) next += b[j] * v[j][t];
      y.push_back(next);
    }
    auto fit = fit_dynamical(y, v, order, intercept);
    for (int i = 0; i <= order; ++i) worst = std::max(worst, std::abs(fit.model.a[i] - a[i]));
    for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(fit.model.b[j] - b[j]));
    worst = std::max(worst, std::abs(fit.model.c - c0));
  }
  std::ostringstream msg;
  msg << "max coefficient error " << worst;
  c.need(worst <= kCoefficientTolerance, msg.str());
  c.need(seconds_since(t0) < kLeastSquaresSeconds, "least-squares suite over its time budget");
}

// ---------------------------------------------------------------------------

void discretized(Check& c) {
  using namespace prediction;
  std::mt19937 rng(55);
  for (int round = 0; round < 20; ++round) {
    std::uniform_real_distribution<double> u(-50.0 * (round + 1), 100.0 * (round + 1));
    std::vector<DiscreteSample> samples;
    std::set<std::vector<int>> seen;
    std::size_t n = 30 + 3 * round;
    while (samples.size() < n) {
      auto x = random_vector(rng, 8);
      if (!seen.insert(x.values()).second) continue;
      samples.push_back({x, u(rng)});
    }
    auto d = fit_discretized(samples, kSegments, kPotentialFloor);
    double lo = samples[0].y, hi = samples[0].y;
    for (const auto& s : samples) lo = std::min(lo, s.y), hi = std::max(hi, s.y);
    double half = (hi - lo) / kSegments / 2.0;
    for (const auto& s : samples) {
      auto p = predict_discretized(d, s.inputs);
      c.need(std::abs(p.value - s.y) <= half * (1 + 1e-12), "training point predicted outside half a segment");
    }
  }
}

// ---------------------------------------------------------------------------

void decisions(Check& c) {
  using namespace decision;
  std::mt19937 rng(1000);
  for (int round = 0; round < 1000; ++round) {
    std::size_t n = 1 + rng() % 8, m = 1 + rng() % 8;
    DecisionTable t;
    for (std::size_t i = 0; i < n; ++i) t.variants.push_back("v" + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) t.situations.push_back("s" + std::to_string(j));
    // Small integer values make ties frequent.
    t.values.assign(n, std::vector<double>(m));
    for (auto& row : t.values)
      for (auto& x : row) x = static_cast<double>(static_cast<int>(rng() % 5) - 2);
    std::vector<double> p(m);
    double total = 0;
    for (auto& x : p) total += (x = static_cast<double>(rng() % 4));
    if (total == 0) p[0] = total = 1;
    for (auto& x : p) x /= total;
    t.probabilities = p;
    auto pes = choose_pessimistic(t), opt = choose_optimistic(t), pra = choose_pragmatic(t);
    auto bp = oracle::brute_choice(t.values, p, 0), bo = oracle::brute_choice(t.values, p, 1),
         bx = oracle::brute_choice(t.values, p, 2);
    c.need(pes.variant == bp.first && pes.value == bp.second, "pessimistic choice differs from brute force");
    c.need(opt.variant == bo.first && opt.value == bo.second, "optimistic choice differs from brute force");
    c.need(pra.variant == bx.first, "pragmatic choice differs from brute force");
    c.need(pes.value <= opt.value, "pessimistic value exceeds optimistic value");
  }

  auto post = bayes_posterior({{"h1", "h2"}, {0.5, 0.5}, {0.8, 0.2}, "e"});
  c.need(post.size() == 2 && std::abs(post[0] - 0.8) < 1e-12 && std::abs(post[1] - 0.2) < 1e-12,
         "posteriors for priors (0.5, 0.5) and likelihoods (0.8, 0.2) are not (0.8, 0.2)");
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int round = 0; round < 1000; ++round) {
    std::size_t k = 2 + rng() % 6;
    BayesInput in;
    double total = 0;
    for (std::size_t i = 0; i < k; ++i) {
      in.hypotheses.push_back("h" + std::to_string(i));
      in.priors.push_back(u(rng));
      total += in.priors.back();
      in.likelihoods.push_back(u(rng));
    }
    for (auto& x : in.priors) x /= total;
    double sum = 0;
    for (double x : bayes_posterior(in)) sum += x;
    c.need(std::abs(sum - 1.0) <= kPosteriorSumTolerance, "posteriors do not sum to one");
  }
}

// ---------------------------------------------------------------------------

// Preorder walk from the root, written here rather than taken from the tree.
bool ids_follow_preorder(const inference::GoalTree& t) {
  if (t.nodes.empty()) return true;
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> walk = [&](std::size_t id) {
    order.push_back(id);
    for (auto child : t.nodes[id].children) {
      if (!t.nodes[child].parent || *t.nodes[child].parent != id) order.push_back(t.nodes.size());
      walk(child);
    }
  };
  walk(0);
  if (order.size() != t.nodes.size()) return false;
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] != i || t.nodes[i].id != i) return false;
  return true;
}

void inference_engine(Check& c) {
  auto reg = inference::standard_registry();
  std::mt19937 rng(200);
  for (int iter = 0; iter < 200; ++iter) {
    auto dc = gen::random_datalog(rng);
    auto expected = oracle::datalog_fixpoint(dc.kb, dc.store);
    for (const auto& [name, arity] : dc.predicates) {
      core::Atom q{name, {}};
      for (std::size_t j = 0; j < arity; ++j) q.args.push_back(core::Term::variable("V" + std::to_string(j)));
      std::set<std::string> got, want;
      for (const auto& s : inference::solve_all(dc.kb, dc.store, reg, q)) {
        got.insert(core::to_string(s.goal));
        c.need(ids_follow_preorder(s.tree), "proof tree ids are not in preorder");
      }
      for (const auto& f : expected)
        if (core::unify(q, lang::parse_query(f))) want.insert(f);
      c.need(got == want, "solutions differ from the bottom-up fixpoint for " + core::to_string(q));
    }
  }

  auto parsed = lang::parse_kb("phi <- phi1, phi2.\nphi <- phi3, phi4.\nphi3.\nphi4.\n");
  c.need(parsed.ok(), "two-alternative fixture does not parse");
  core::FactStore store;
  auto sols = inference::solve_all(parsed.kb, store, reg, lang::parse_query("phi"));
  c.need(sols.size() == 1, "two-alternative fixture should have one proof");
  if (sols.size() == 1) {
    const auto& t = sols[0].tree;
    c.need(t.nodes[0].clause == std::optional<std::size_t>(1), "phi is not proven by its second clause");
    std::vector<std::string> atoms;
    for (const auto& n : t.nodes) atoms.push_back(core::to_string(n.goal));
    c.need(atoms == std::vector<std::string>{"phi", "phi3", "phi4"}, "proof tree is not phi, phi3, phi4");
    c.need(ids_follow_preorder(t), "two-alternative proof is not in preorder");
  }

  for (const char* name : {"blast_furnace", "threat_signal", "market_partner", "region_fx"}) {
    auto r = fixtures::run(name);
    // Trace JSON must list children in the order the goals were selected.
    std::function<bool(const json&, long&)> ordered = [&](const json& node, long& last) {
      long id = node.at("id").get<long>();
      if (id <= last) return false;
      last = id;
      for (const auto& ch : node.at("children"))
        if (!ordered(ch, last)) return false;
      return true;
    };
    long last = -1;
    c.need(ordered(r.trace, last), std::string("scenario trace is not in preorder: ") + name);
  }
}

// ---------------------------------------------------------------------------

void rule_language(Check& c) {
  std::mt19937 rng(500);
  for (int i = 0; i < 500; ++i) {
    auto kb = gen::random_kb(rng);
    auto text = lang::serialize_kb(kb);
    auto r = lang::parse_kb(text);
    c.need(r.ok() && r.kb == kb, "round trip changed a generated KB");
    c.need(lang::serialize_kb(r.kb) == text, "serialization is not stable");
  }
  struct Fixture {
    const char* text;
    std::size_t line, column;
  };
  const Fixture fixtures[] = {
      {"g(X,Z <- p(X).", 1, 2},        {"p(a)", 1, 4},
      {"p(a) <- .", 1, 9},             {"ok(1).\nbad(1,,2).", 2, 7},
      {"x(\"open string).", 1, 3},     {"prop -> b.", 1, 6},
      {"prop a -> .", 1, 11},          {"prop a -> a.", 1, 11},
      {"p([1, 2).", 1, 3},             {"p(a) q(b).", 1, 6},
      {"p(X) <- q(X), .", 1, 15},      {"P(a).", 1, 1},
      {"p(a) @ q.", 1, 6},             {"a.\nb.\n  c(\n", 3, 4},
  };
  for (const auto& f : fixtures) {
    auto r = lang::parse_kb(f.text);
    const lang::ParseDiagnostic* err = nullptr;
    for (const auto& d : r.diagnostics)
      if (d.severity == lang::Severity::Error) {
        err = &d;
        break;
      }
    c.need(err != nullptr, std::string("no error for ") + f.text);
    if (!err) continue;
    c.need(err->span.start_line == f.line && err->span.start_column == f.column,
           std::string("misplaced error span for ") + f.text);
    c.need(!lang::span_text(f.text, err->span).empty(), std::string("empty error span for ") + f.text);
  }
}

// ---------------------------------------------------------------------------

// "1234.56" -> 123456, written without the library's money code.
long long cents(const std::string& s) {
  bool neg = !s.empty() && s[0] == '-';
  long long whole = 0, frac = 0;
  std::size_t i = neg ? 1 : 0;
  for (; i < s.size() && s[i] != '.'; ++i) whole = whole * 10 + (s[i] - '0');
  int digits = 0;
  for (++i; i < s.size(); ++i, ++digits) frac = frac * 10 + (s[i] - '0');
  while (digits < 2) frac *= 10, ++digits;
  long long v = whole * 100 + frac;
  return neg ? -v : v;
}

void end_to_end(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  auto first = fixtures::run("blast_furnace");
  auto second = fixtures::run("blast_furnace");
  double elapsed = seconds_since(t0) / 2.0;
  c.need(first.state == scenarios::ScenarioRun::State::Done, "blast-furnace run did not finish: " + first.error);
  if (!c.ok()) return;
  const auto& rep = first.report;
  c.need(rep.dump() == second.report.dump() && first.trace.dump() == second.trace.dump(),
         "two runs are not byte-identical");

  const auto& measures = rep["measures"];
  c.need(measures.size() == 8, "expected exactly 8 restoration measures");
  c.need(!measures.empty() && measures[0]["description"] == "pump out water from constructions",
         "pump-out is not the first measure");
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < measures.size(); ++i) position[measures[i]["id"]] = i;
  std::set<std::string> tags;
  for (const char* t : {"flooding", "waterway_damage", "substation_flooded", "pump_station_disabled",
                        "tuyeres_damaged", "tank_fire", "gas_pipeline_damage", "cables_damage"})
    tags.insert(t);
  for (const auto& cl : fixtures::packages().get("production").kb.clauses()) {
    if (!cl.body.empty() || cl.head.predicate != "requires" || cl.head.args.size() != 2) continue;
    auto m = core::to_string(cl.head.args[0]), pre = core::to_string(cl.head.args[1]);
    if (position.count(m) && position.count(pre))
      c.need(position[pre] < position[m], "measure " + m + " is listed before its prerequisite " + pre);
  }
  for (const auto& m : measures)
    for (const auto& pre : m["prerequisites"])
      c.need(position.count(pre.get<std::string>()) &&
                 measures[position[pre.get<std::string>()]]["end_day"].get<double>() <= m["start_day"].get<double>(),
             "measure starts before a prerequisite ends");

  long long sheets = 0;
  for (const auto& s : rep["expenses"]["sheets"]) sheets += cents(s["total"]["amount"]);
  c.need(sheets == cents(rep["expenses"]["total"]["amount"]), "expense total differs from the sum of its sheets");
  c.need(rep["expenses"]["sheets"].size() == measures.size(), "one expense sheet per measure expected");

  std::set<std::string> factors;
  for (const auto& [k, v] : rep["consequences"]["factors"].items()) factors.insert(k);
  c.need(factors == std::set<std::string>{"sale_volume_change", "penalty_sanctions", "account_payable_increase"},
         "consequence factor groups differ from the expected three");

  bool duster = false;
  for (const auto& p : rep["propositions"])
    duster |= p["kind"] == "reliability-improvement" && p["description"] == "change the construction of duster";
  c.need(duster, "no 'change the construction of duster' proposition");
  c.need(elapsed < kEndToEndSeconds, "blast-furnace run over its time budget");
}

// ---------------------------------------------------------------------------

// Key structure with value types; arrays take the schema of their first element.
json schema_of(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = schema_of(v);
    return out;
  }
  if (j.is_array()) return json::array({j.empty() ? json("empty") : schema_of(j[0])});
  if (j.is_number()) return "number";
  return j.type_name();
}

void scenario_coverage(Check& c) {
  struct Case {
    const char* fixture;
    const char* section;
    std::vector<std::string> outputs;
  };
  const Case cases[] = {
      {"market_goods", "market", {"consumer_value", "sales_influence", "plan_info", "new_technology"}},
      {"market_segment", "market", {"segment_analysis", "sales_volume", "plan_info"}},
      {"market_partner", "market", {"financial_state", "consequences", "other_propositions"}},
      {"region_fx", "region", {"prediction", "consequences"}},
      {"region_customs", "region", {"announced_change", "consequences"}},
      {"region_political", "region", {"consequences"}},
  };
  for (const auto& k : cases) {
    auto r = fixtures::run(k.fixture);
    c.need(r.state == scenarios::ScenarioRun::State::Done, std::string(k.fixture) + " did not finish: " + r.error);
    if (r.state != scenarios::ScenarioRun::State::Done) continue;
    const auto& section = r.report[k.section];
    for (const auto& out : k.outputs)
      c.need(section.is_object() && section.contains(out) && !section[out].is_null(),
             std::string(k.fixture) + " lacks " + k.section + "." + out);
  }
  auto goods = fixtures::run("market_goods").report;
  c.need(goods["market"]["new_technology"]["triggered"] == true, "new-technology proposition not triggered");

  auto prod = fixtures::run("blast_furnace");
  auto eco = fixtures::run("region_eco");
  c.need(eco.state == scenarios::ScenarioRun::State::Done, "ecocatastrophe run did not finish: " + eco.error);
  json ps = schema_of(prod.report), es = schema_of(eco.report);
  c.need(ps == es, "ecocatastrophe report schema differs from the production schema");
  c.need(eco.report["event_analysis"].is_object() && !eco.report["measures"].empty(),
         "ecocatastrophe report lacks the production outputs");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Check&);
  };
  const Criterion criteria[] = {
      {"classifier oracle suite", classifiers},
      {"least-squares recovery", least_squares},
      {"discretized prediction", discretized},
      {"decision criteria", decisions},
      {"inference engine", inference_engine},
      {"rule language", rule_language},
      {"end-to-end blast furnace", end_to_end},
      {"scenario coverage", scenario_coverage},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.need(false, std::string("exception: ") + e.what());
    }
    double s = seconds_since(t0);
    if (c.ok())
      std::printf("PASS  %-26s %6zu checks  %.3f s\n", cr.name, c.checks(), s);
    else
      std::printf("FAIL  %-26s %s\n", cr.name, c.failure().c_str());
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
