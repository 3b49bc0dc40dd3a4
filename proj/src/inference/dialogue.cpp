#include "ace/inference/dialogue.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ace/core/error.hpp"

namespace ace::inference {

std::set<std::string> forward_chain(const std::vector<core::PropRule>& rules, const std::set<std::string>& known) {
  std::set<std::string> all = known, derived;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (all.count(r.consequent)) continue;
      bool fire = std::all_of(r.antecedents.begin(), r.antecedents.end(),
                              [&](const std::string& a) { return all.count(a) > 0; });
      if (fire) {
        all.insert(r.consequent);
        derived.insert(r.consequent);
        changed = true;
      }
    }
  }
  return derived;
}

void DialogueState::answer(bool yes) {
  if (!pending) throw Error("no question is pending");
  (yes ? known_true : known_false).insert(pending->proposition);
  pending.reset();
}

namespace {

using Term = std::set<std::string>;  // conjunction of unknown askables
using Dnf = std::vector<Term>;        // minimal disjunction

void add_absorbing(Dnf& dnf, const Term& t) {
  for (const auto& u : dnf)
    if (std::includes(t.begin(), t.end(), u.begin(), u.end())) return;
  dnf.erase(std::remove_if(dnf.begin(), dnf.end(),
                           [&](const Term& u) { return std::includes(u.begin(), u.end(), t.begin(), t.end()); }),
            dnf.end());
  dnf.push_back(t);
}

Dnf conjoin(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Term t = x;
      t.insert(y.begin(), y.end());
      add_absorbing(out, t);
    }
  return out;
}

bool same(Dnf a, Dnf b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

DialogueResult dialogue_step(const std::vector<core::PropRule>& rules, DialogueState& state,
                             const std::string& target) {
  std::map<std::string, std::string> questions;
  std::set<std::string> props, heads;
  for (const auto& r : rules) {
    for (const auto& [p, q] : r.questions) questions.emplace(p, q);
    props.insert(r.consequent);
    heads.insert(r.consequent);
    props.insert(r.antecedents.begin(), r.antecedents.end());
  }
  props.insert(target);

  state.derived = forward_chain(rules, state.known_true);
  state.pending.reset();
  if (state.known_true.count(target) || state.derived.count(target)) return {DialogueOutcome::Proven, false};
  if (state.known_false.count(target)) return {DialogueOutcome::Refuted, false};
  if (!heads.count(target) && !questions.count(target)) return {DialogueOutcome::Refuted, true};

  auto unknown_askable = [&](const std::string& p) {
    return questions.count(p) && !state.known_true.count(p) && !state.known_false.count(p) && !state.derived.count(p);
  };

  // Minimal DNF of every proposition over the still-unknown askables.
  std::map<std::string, Dnf> dnf;
  for (const auto& p : props) {
    if (state.known_true.count(p) || state.derived.count(p))
      dnf[p] = {Term{}};
    else if (unknown_askable(p))
      dnf[p] = {Term{p}};
    else
      dnf[p] = {};
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      if (state.known_false.count(r.consequent)) continue;
      Dnf body{Term{}};
      for (const auto& a : r.antecedents) body = conjoin(body, dnf[a]);
      Dnf merged = dnf[r.consequent];
      for (const auto& t : body) add_absorbing(merged, t);
      if (!same(merged, dnf[r.consequent])) {
        dnf[r.consequent] = std::move(merged);
        changed = true;
      }
    }
  }
  const Dnf& goal = dnf[target];
  if (goal.empty()) return {DialogueOutcome::Refuted, false};

  std::set<std::string> relevant;
  for (const auto& t : goal) relevant.insert(t.begin(), t.end());

  std::set<std::string> visited;
  std::optional<std::string> next;
  std::function<void(const std::string&)> visit = [&](const std::string& p) {
    if (next || !visited.insert(p).second) return;
    if (unknown_askable(p) && relevant.count(p)) {
      next = p;
      return;
    }
    for (const auto& r : rules) {
      if (r.consequent != p) continue;
      for (const auto& a : r.antecedents) {
        if (state.known_false.count(a)) break;
        visit(a);
        if (next) return;
      }
    }
  };
  visit(target);
  if (!next) {
    // Every relevant askable is reachable from the target, so this only
    // happens for a target that is itself the sole askable.
    next = *relevant.begin();
  }
  state.pending = PendingQuestion{*next, questions.at(*next)};
  return {DialogueOutcome::Question, false};
}

}  // namespace ace::inference
