#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ace/core/knowledge_base.hpp"

namespace ace::inference {

/// Least fixpoint of the rules over `known`; returns only the newly
/// derived propositions.
std::set<std::string> forward_chain(const std::vector<core::PropRule>& rules, const std::set<std::string>& known);

struct PendingQuestion {
  std::string proposition;
  std::string text;
};

struct DialogueState {
  std::set<std::string> known_true;
  std::set<std::string> known_false;
  std::set<std::string> derived;
  std::optional<PendingQuestion> pending;

  /// Records the operator's answer to the pending question.
  void answer(bool yes);
};

enum class DialogueOutcome { Proven, Refuted, Question };

struct DialogueResult {
  DialogueOutcome outcome = DialogueOutcome::Refuted;
  /// The target has no rule and no question.
  bool unprovable = false;
};

/// Advances a yes/no dialogue towards `target`. Propositions that carry a
/// question text somewhere are askable; unknown propositions with neither
/// question nor rule count as false. The next question is the first
/// unknown askable proposition, in depth-first order over the target's
/// rules, whose answer can still change the outcome.
DialogueResult dialogue_step(const std::vector<core::PropRule>& rules, DialogueState& state,
                             const std::string& target);

}  // namespace ace::inference
