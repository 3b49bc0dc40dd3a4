#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ace/core/fact_store.hpp"
#include "ace/core/knowledge_base.hpp"
#include "ace/core/term.hpp"
#include "ace/core/unify.hpp"

namespace ace::inference {

class Solver;

enum class QuestionKind { YesNo, Number };

struct Question {
  std::size_t id = 0;
  std::string text;
  QuestionKind kind = QuestionKind::YesNo;
};

/// Operator answer: yes/no or a number.
struct AnswerValue {
  QuestionKind kind = QuestionKind::YesNo;
  bool yes = false;
  double number = 0.0;

  static AnswerValue yes_no(bool v) { return {QuestionKind::YesNo, v, 0.0}; }
  static AnswerValue numeric(double v) { return {QuestionKind::Number, false, v}; }
};

/// What a builtin sees during one call.
class CallContext {
 public:
  CallContext(Solver& solver, core::FactStore& store, const core::KnowledgeBase& kb, std::size_t scope,
              std::size_t node)
      : solver_(solver), store_(store), kb_(kb), scope_(scope), node_(node) {}

  core::FactStore& store() { return store_; }
  const core::KnowledgeBase& kb() const { return kb_; }
  /// Goal-tree node id of the call, usable as an evidence reference.
  std::size_t node() const { return node_; }

  /// Value of a variable as written in the calling clause.
  std::optional<core::Term> variable(const std::string& name) const;

  /// Cached operator answer, or suspends the solver until one arrives.
  bool ask_yes_no(const std::string& question);
  double ask_number(const std::string& question);

  /// Registers an action that reverts a side effect on backtracking.
  void on_undo(std::function<void()> undo);

 private:
  Solver& solver_;
  core::FactStore& store_;
  const core::KnowledgeBase& kb_;
  std::size_t scope_;
  std::size_t node_;
};

/// A builtin returns one argument tuple per answer; each tuple is unified
/// with the call's arguments in order. An empty result is failure.
using Answers = std::vector<std::vector<core::Term>>;
using BuiltinHandler = std::function<Answers(const std::vector<core::Term>& args, CallContext& ctx)>;

struct Builtin {
  std::string name;
  std::size_t arity = 0;
  /// One character per argument: '+' must be bound on call, '?' anything.
  std::string modes;
  BuiltinHandler handler;
};

class BuiltinRegistry {
 public:
  /// Throws on a duplicate name/arity.
  void add(Builtin builtin);
  const Builtin* find(const std::string& name, std::size_t arity) const;
  bool contains(const std::string& name, std::size_t arity) const { return find(name, arity) != nullptr; }
  std::vector<std::pair<std::string, std::size_t>> names() const;

 private:
  std::map<std::pair<std::string, std::size_t>, Builtin> builtins_;
};

/// select/3, eval/2, lt/le/eq/gt/ge, length/2, nth/3, append/3,
/// member/2, ask/2, ask_number/2, classify/3, predict/3, choose/4,
/// bayes/3 and infer/1.
BuiltinRegistry standard_registry();

/// Arithmetic over `+ - * / ( )`, decimal literals and variables.
/// `lookup` yields a variable's value or nullopt when it is unbound.
double evaluate_expression(std::string_view expr,
                           const std::function<std::optional<double>(const std::string&)>& lookup);

/// Helpers for builtin authors.
double number_arg(const std::vector<core::Term>& args, std::size_t i, const std::string& who);
std::string name_arg(const std::vector<core::Term>& args, std::size_t i, const std::string& who);
std::vector<double> number_list_arg(const std::vector<core::Term>& args, std::size_t i, const std::string& who);
/// A symbol when `s` is a plain identifier, text otherwise.
core::Term label_term(const std::string& s);

}  // namespace ace::inference
