#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ace/core/term.hpp"

namespace ace::core {

/// Finite map from variable names to terms. Bindings may refer to other
/// bound variables; `apply` follows them to a fixpoint.
class Substitution {
 public:
  const Term* lookup(const std::string& var) const;
  void bind(const std::string& var, Term value) { map_.insert_or_assign(var, std::move(value)); }
  void unbind(const std::string& var) { map_.erase(var); }

  /// Follows variable bindings at the top level only.
  const Term& walk(const Term& t) const;
  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;

  /// Rewrites every binding into its fully applied form, which makes
  /// the map idempotent under `apply`.
  Substitution normalized() const;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<std::string, Term>& bindings() const { return map_; }

  friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

 private:
  std::map<std::string, Term> map_;
};

/// In-place unification with occurs check. Every new binding is appended
/// to `trail` when given; on failure some bindings may already have been
/// made and the caller is expected to undo them from the trail.
bool unify_into(const Term& a, const Term& b, Substitution& s, std::vector<std::string>* trail = nullptr);

/// Most general unifier extending `s`, or nullopt.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s = {});
std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& s = {});

}  // namespace ace::core
