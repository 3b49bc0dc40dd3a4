#include "ace/inference/builtins.hpp"

#include <cctype>
#include <cmath>

#include "ace/core/error.hpp"
#include "ace/decision/decision.hpp"
#include "ace/diagnostics/classifiers.hpp"
#include "ace/inference/dialogue.hpp"
#include "ace/prediction/prediction.hpp"

namespace ace::inference {

using core::Atom;
using core::Term;

void BuiltinRegistry::add(Builtin builtin) {
  if (builtin.modes.size() != builtin.arity)
    throw Error("builtin " + builtin.name + "/" + std::to_string(builtin.arity) + " needs one mode per argument");
  auto key = std::make_pair(builtin.name, builtin.arity);
  if (builtins_.count(key)) throw Error("builtin " + builtin.name + "/" + std::to_string(builtin.arity) + " already registered");
  builtins_.emplace(key, std::move(builtin));
}

const Builtin* BuiltinRegistry::find(const std::string& name, std::size_t arity) const {
  auto it = builtins_.find({name, arity});
  return it == builtins_.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, std::size_t>> BuiltinRegistry::names() const {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [key, b] : builtins_) out.push_back(key);
  return out;
}

double number_arg(const std::vector<Term>& args, std::size_t i, const std::string& who) {
  if (!args.at(i).is_number()) throw Error(who + ": argument " + std::to_string(i + 1) + " must be a number");
  return args[i].number();
}

std::string name_arg(const std::vector<Term>& args, std::size_t i, const std::string& who) {
  const Term& t = args.at(i);
  if (t.is_symbol() || t.is_text()) return t.name();
  throw Error(who + ": argument " + std::to_string(i + 1) + " must be a name");
}

std::vector<double> number_list_arg(const std::vector<Term>& args, std::size_t i, const std::string& who) {
  auto items = core::list_items(args.at(i));
  if (!items) throw Error(who + ": argument " + std::to_string(i + 1) + " must be a list");
  std::vector<double> out;
  for (const auto& t : *items) {
    if (!t.is_number()) throw Error(who + ": argument " + std::to_string(i + 1) + " must hold numbers only");
    out.push_back(t.number());
  }
  return out;
}

Term label_term(const std::string& s) { return core::is_identifier(s) ? Term::symbol(s) : Term::text(s); }

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view s, const std::function<std::optional<double>(const std::string&)>& lookup)
      : s_(s), lookup_(lookup) {}

  double run() {
    double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression \"" + std::string(s_) + "\" at offset " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double sum() {
    double v = product();
    for (;;) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        std::size_t at = pos_;
        double d = unary();
        if (d == 0.0) {
          pos_ = at;
          fail("division by zero");
        }
        v /= d;
      } else {
        return v;
      }
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  double primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      double v = sum();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        else
          pos_ = save;
      }
      std::string text(s_.substr(start, pos_ - start));
      char* end = nullptr;
      double v = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size()) {
        pos_ = start;
        fail("malformed number");
      }
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (!core::is_variable_name(name)) {
        pos_ = start;
        fail("'" + name + "' is not a variable");
      }
      auto v = lookup_(name);
      if (!v) {
        pos_ = start;
        fail("variable " + name + " is unbound or not a number");
      }
      return *v;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::function<std::optional<double>(const std::string&)>& lookup_;
  std::size_t pos_ = 0;
};

std::vector<Term> items_arg(const std::vector<Term>& args, std::size_t i, const std::string& who) {
  auto items = core::list_items(args.at(i));
  if (!items) throw Error(who + ": argument " + std::to_string(i + 1) + " must be a proper list");
  return *items;
}

const core::NumericTable& table_arg(CallContext& ctx, const std::string& name, const std::string& who) {
  const auto* t = ctx.store().table(name);
  if (!t) throw Error(who + ": no table named '" + name + "'");
  return *t;
}

Answers compare(const std::vector<Term>& args, const std::string& who, bool (*op)(double, double)) {
  return op(number_arg(args, 0, who), number_arg(args, 1, who)) ? Answers{args} : Answers{};
}

/// Columns `class` and features (every other value column, in order).
diagnostics::ExperienceTable experience_from(const core::NumericTable& t, const std::string& who) {
  auto cls = t.value_index("class");
  if (!cls) throw Error(who + ": table needs a 'class' column");
  std::size_t dim = t.columns.size() - 2;
  diagnostics::ExperienceTable out(dim);
  for (const auto& row : t.rows) {
    std::vector<int> x;
    for (std::size_t j = 0; j < row.values.size(); ++j)
      if (j != *cls) x.push_back(static_cast<int>(std::lround(row.values[j])));
    out.add(diagnostics::LogicVector(std::move(x)), static_cast<int>(std::lround(row.values[*cls])));
  }
  return out;
}

Term class_term(const diagnostics::ClassDecision& d) {
  if (d.outcome == diagnostics::Outcome::Undecided) return Term::symbol("undecided");
  return Term::number(d.class_index);
}

Answers classify(const std::vector<Term>& args, CallContext& ctx) {
  const std::string who = "classify/3";
  const Term& model = args[0];
  if (!model.is_compound() || model.arity() < 1) throw Error(who + ": model must be plane(T), surface(T[, D]), freq(T) or potential(T)");
  std::vector<Term> margs = model.args();
  auto table = experience_from(table_arg(ctx, name_arg(margs, 0, who), who), who);
  auto values = number_list_arg(args, 1, who);
  std::vector<int> xi;
  for (double v : values) xi.push_back(static_cast<int>(std::lround(v)));
  diagnostics::LogicVector x(std::move(xi));
  if (x.size() != table.dimension())
    throw Error(who + ": vector has " + std::to_string(x.size()) + " components, table has " +
                std::to_string(table.dimension()));
  Term result;
  const std::string& kind = model.name();
  if (kind == "plane") {
    result = class_term(diagnostics::classify_geometric(diagnostics::fit_separating_plane(table), x));
  } else if (kind == "surface") {
    int degree = margs.size() > 1 ? static_cast<int>(number_arg(margs, 1, who)) : 2;
    result = class_term(diagnostics::classify_geometric(diagnostics::fit_separating_surface(table, degree), x));
  } else if (kind == "freq" || kind == "frequencies") {
    result = Term::number(diagnostics::classify_frequencies(diagnostics::fit_frequencies(table), x));
  } else if (kind == "potential") {
    result = class_term(diagnostics::classify_potential(diagnostics::fit_potential(table), x));
  } else {
    throw Error(who + ": unknown model '" + kind + "'");
  }
  return {{args[0], args[1], result}};
}

Answers predict(const std::vector<Term>& args, CallContext& ctx) {
  const std::string who = "predict/3";
  const Term& model = args[0];
  if (!model.is_compound() || model.arity() < 1)
    throw Error(who + ": model must be regression(T[, D]) or dynamical(T, Order)");
  std::vector<Term> margs = model.args();
  const auto& t = table_arg(ctx, name_arg(margs, 0, who), who);
  auto y = t.value_index("y");
  if (!y) throw Error(who + ": table needs a 'y' column");
  std::vector<std::size_t> others;
  for (std::size_t j = 0; j + 1 < t.columns.size(); ++j)
    if (j != *y) others.push_back(j);
  if (model.name() == "regression") {
    int degree = margs.size() > 1 ? static_cast<int>(number_arg(margs, 1, who)) : 1;
    std::vector<prediction::Sample> samples;
    for (const auto& row : t.rows) {
      prediction::Sample s;
      for (auto j : others) s.inputs.push_back(row.values[j]);
      s.y = row.values[*y];
      samples.push_back(std::move(s));
    }
    auto fit = prediction::fit_regression(samples, degree);
    auto inputs = number_list_arg(args, 1, who);
    if (inputs.size() != others.size())
      throw Error(who + ": expected " + std::to_string(others.size()) + " inputs, got " + std::to_string(inputs.size()));
    return {{args[0], args[1], Term::number(prediction::predict_regression(fit.model, inputs).value)}};
  }
  if (model.name() == "dynamical") {
    if (margs.size() != 2) throw Error(who + ": dynamical(T, Order) expected");
    int order = static_cast<int>(number_arg(margs, 1, who));
    double h = number_arg(args, 1, who);
    if (h < 0 || h != std::floor(h)) throw Error(who + ": horizon must be a non-negative integer");
    std::vector<double> history;
    std::vector<std::vector<double>> exo(others.size());
    for (const auto& row : t.rows) {
      history.push_back(row.values[*y]);
      for (std::size_t k = 0; k < others.size(); ++k) exo[k].push_back(row.values[others[k]]);
    }
    auto fit = prediction::fit_dynamical(history, exo, order);
    prediction::ExogenousScenario scenario;
    scenario.hold_last = true;
    std::vector<double> last;
    for (const auto& series : exo) last.push_back(series.empty() ? 0.0 : series.back());
    scenario.steps.push_back(last);
    auto forecast = prediction::simulate_dynamical(fit.model, history, scenario, static_cast<std::size_t>(h));
    std::vector<Term> items;
    for (double v : forecast) items.push_back(Term::number(v));
    return {{args[0], args[1], Term::list(std::move(items))}};
  }
  throw Error(who + ": unknown model '" + model.name() + "'");
}

Answers choose(const std::vector<Term>& args, CallContext& ctx) {
  const std::string who = "choose/4";
  const auto& t = table_arg(ctx, name_arg(args, 0, who), who);
  decision::DecisionTable d;
  d.situations.assign(t.columns.begin() + 1, t.columns.end());
  for (const auto& row : t.rows) {
    std::string lower = row.label;
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "p" || lower == "probability" || lower == "probabilities") {
      d.probabilities = row.values;
      continue;
    }
    d.variants.push_back(row.label);
    d.values.push_back(row.values);
  }
  if (!(args[2].is_symbol() && args[2].name() == "none")) d.probabilities = number_list_arg(args, 2, who);
  auto result = decision::choose(d, decision::parse_criterion(name_arg(args, 1, who)));
  return {{args[0], args[1], args[2], label_term(d.variants[result.variant])}};
}

Answers append(const std::vector<Term>& args, CallContext&) {
  auto a = core::list_items(args[0]);
  auto b = core::list_items(args[1]);
  if (a && args[1].is_ground()) {
    auto out = *a;
    if (b) {
      out.insert(out.end(), b->begin(), b->end());
      return {{args[0], args[1], Term::list(out)}};
    }
    return {{args[0], args[1], Term::list(out, args[1])}};
  }
  auto c = core::list_items(args[2]);
  if (!c) throw Error("append/3: needs the first two lists or the third");
  Answers out;
  for (std::size_t i = 0; i <= c->size(); ++i) {
    std::vector<Term> head(c->begin(), c->begin() + static_cast<std::ptrdiff_t>(i));
    std::vector<Term> tail(c->begin() + static_cast<std::ptrdiff_t>(i), c->end());
    out.push_back({Term::list(head), Term::list(tail), args[2]});
  }
  return out;
}

Answers infer(const std::vector<Term>& args, CallContext& ctx) {
  std::string target = name_arg(args, 0, "infer/1");
  DialogueState state;
  const auto& rules = ctx.kb().prop_rules();
  for (;;) {
    auto r = dialogue_step(rules, state, target);
    if (r.outcome == DialogueOutcome::Proven) return {args};
    if (r.outcome == DialogueOutcome::Refuted) return {};
    state.answer(ctx.ask_yes_no(state.pending->text));
  }
}

}  // namespace

double evaluate_expression(std::string_view expr,
                           const std::function<std::optional<double>(const std::string&)>& lookup) {
  return ExprParser(expr, lookup).run();
}

BuiltinRegistry standard_registry() {
  BuiltinRegistry r;
  r.add({"select", 3, "+??", [](const std::vector<Term>& args, CallContext& ctx) {
           std::string rel = name_arg(args, 0, "select/3");
           Answers out;
           for (const auto& f : ctx.store().relation(rel)) {
             Term ft = f.as_term();
             if (core::unify(args[1], ft)) out.push_back({args[0], ft, ft});
           }
           return out;
         }});
  r.add({"eval", 2, "+?", [](const std::vector<Term>& args, CallContext& ctx) {
           if (args[0].is_number()) return Answers{{args[0], args[0]}};
           std::string expr = name_arg(args, 0, "eval/2");
           double v = evaluate_expression(expr, [&](const std::string& name) -> std::optional<double> {
             auto t = ctx.variable(name);
             if (t && t->is_number()) return t->number();
             return std::nullopt;
           });
           return Answers{{args[0], Term::number(v)}};
         }});
  r.add({"lt", 2, "++", [](const std::vector<Term>& a, CallContext&) { return compare(a, "lt/2", [](double x, double y) { return x < y; }); }});
  r.add({"le", 2, "++", [](const std::vector<Term>& a, CallContext&) { return compare(a, "le/2", [](double x, double y) { return x <= y; }); }});
  r.add({"gt", 2, "++", [](const std::vector<Term>& a, CallContext&) { return compare(a, "gt/2", [](double x, double y) { return x > y; }); }});
  r.add({"ge", 2, "++", [](const std::vector<Term>& a, CallContext&) { return compare(a, "ge/2", [](double x, double y) { return x >= y; }); }});
  r.add({"eq", 2, "??", [](const std::vector<Term>& a, CallContext&) {
           if (a[0].is_number() && a[1].is_number()) return a[0].number() == a[1].number() ? Answers{a} : Answers{};
           return Answers{{a[0], a[0]}};
         }});
  r.add({"length", 2, "+?", [](const std::vector<Term>& a, CallContext&) {
           auto items = items_arg(a, 0, "length/2");
           return Answers{{a[0], Term::number(static_cast<double>(items.size()))}};
         }});
  r.add({"nth", 3, "++?", [](const std::vector<Term>& a, CallContext&) {
           double i = number_arg(a, 0, "nth/3");
           auto items = items_arg(a, 1, "nth/3");
           if (i != std::floor(i) || i < 1 || i > static_cast<double>(items.size())) return Answers{};
           return Answers{{a[0], a[1], items[static_cast<std::size_t>(i) - 1]}};
         }});
  r.add({"append", 3, "???", append});
  r.add({"member", 2, "?+", [](const std::vector<Term>& a, CallContext&) {
           Answers out;
           for (auto& item : items_arg(a, 1, "member/2")) out.push_back({item, a[1]});
           return out;
         }});
  r.add({"ask", 2, "+?", [](const std::vector<Term>& a, CallContext& ctx) {
           bool yes = ctx.ask_yes_no(name_arg(a, 0, "ask/2"));
           return Answers{{a[0], Term::symbol(yes ? "yes" : "no")}};
         }});
  r.add({"ask_number", 2, "+?", [](const std::vector<Term>& a, CallContext& ctx) {
           double v = ctx.ask_number(name_arg(a, 0, "ask_number/2"));
           return Answers{{a[0], Term::number(v)}};
         }});
  r.add({"classify", 3, "++?", classify});
  r.add({"predict", 3, "++?", predict});
  r.add({"choose", 4, "+++?", choose});
  r.add({"bayes", 3, "++?", [](const std::vector<Term>& a, CallContext&) {
           decision::BayesInput in;
           in.priors = number_list_arg(a, 0, "bayes/3");
           in.likelihoods = number_list_arg(a, 1, "bayes/3");
           std::vector<Term> items;
           for (double p : decision::bayes_posterior(in)) items.push_back(Term::number(p));
           return Answers{{a[0], a[1], Term::list(std::move(items))}};
         }});
  r.add({"infer", 1, "+", infer});
  return r;
}

}  // namespace ace::inference
