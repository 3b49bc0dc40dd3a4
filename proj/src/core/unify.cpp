#include "ace/core/unify.hpp"

namespace ace::core {

const Term* Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

const Term& Substitution::walk(const Term& t) const {
  const Term* cur = &t;
  while (cur->is_variable()) {
    const Term* next = lookup(cur->name());
    if (!next) break;
    cur = next;
  }
  return *cur;
}

Term Substitution::apply(const Term& t) const {
  const Term& w = walk(t);
  if (!w.is_compound()) return w;
  std::vector<Term> args;
  args.reserve(w.arity());
  bool changed = false;
  for (const auto& a : w.args()) {
    args.push_back(apply(a));
    if (!(args.back() == a)) changed = true;
  }
  if (!changed) return w;
  return Term::compound(w.name(), std::move(args));
}

Atom Substitution::apply(const Atom& a) const {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

Substitution Substitution::normalized() const {
  Substitution out;
  for (const auto& [var, value] : map_) out.map_.emplace(var, apply(value));
  return out;
}

namespace {

bool occurs(const std::string& var, const Term& t, const Substitution& s) {
  const Term& w = s.walk(t);
  if (w.is_variable()) return w.name() == var;
  for (const auto& a : w.args())
    if (occurs(var, a, s)) return true;
  return false;
}

}  // namespace

bool unify_into(const Term& a, const Term& b, Substitution& s, std::vector<std::string>* trail) {
  const Term& x = s.walk(a);
  const Term& y = s.walk(b);
  if (x.is_variable() && y.is_variable() && x.name() == y.name()) return true;
  if (x.is_variable()) {
    if (occurs(x.name(), y, s)) return false;
    Term value = y;
    std::string name = x.name();
    s.bind(name, std::move(value));
    if (trail) trail->push_back(std::move(name));
    return true;
  }
  if (y.is_variable()) return unify_into(y, x, s, trail);
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case TermKind::Number:
      return x.number() == y.number();
    case TermKind::Compound: {
      if (x.name() != y.name() || x.arity() != y.arity()) return false;
      // Copies keep the argument vectors alive while `s` grows.
      Term xa = x, ya = y;
      for (std::size_t i = 0; i < xa.arity(); ++i)
        if (!unify_into(xa.args()[i], ya.args()[i], s, trail)) return false;
      return true;
    }
    default:
      return x.name() == y.name();
  }
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out.normalized();
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& s) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return std::nullopt;
  Substitution out = s;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!unify_into(a.args[i], b.args[i], out)) return std::nullopt;
  return out.normalized();
}

}  // namespace ace::core
