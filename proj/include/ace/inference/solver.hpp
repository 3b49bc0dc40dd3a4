#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/core/error.hpp"
#include "ace/core/fact_store.hpp"
#include "ace/core/knowledge_base.hpp"
#include "ace/core/unify.hpp"
#include "ace/inference/builtins.hpp"

namespace ace::inference {

enum class NodeStatus { Proven, Failed, Pending };
std::string status_name(NodeStatus s);

struct GoalNode {
  std::size_t id = 0;
  core::Atom goal;
  NodeStatus status = NodeStatus::Proven;
  /// Index of the knowledge-base clause that resolved the goal.
  std::optional<std::size_t> clause;
  /// "clause", "fact", "builtin" or empty when unresolved.
  std::string source;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

/// Proof search tree; node ids follow goal selection order.
struct GoalTree {
  std::vector<GoalNode> nodes;

  bool empty() const { return nodes.empty(); }
  /// Node ids in depth-first, left-to-right order from the root.
  std::vector<std::size_t> preorder() const;
  nlohmann::json to_json() const;
};

/// Depth-limit overruns, builtin mode violations and builtin errors. The
/// goal tree at the point of the error is attached.
class InferenceError : public Error {
 public:
  explicit InferenceError(const std::string& message, GoalTree tree = {})
      : Error(message), tree_(std::move(tree)) {}
  const GoalTree& tree() const { return tree_; }

 private:
  GoalTree tree_;
};

struct Limits {
  std::size_t max_depth = 10000;
  std::size_t max_solutions = std::numeric_limits<std::size_t>::max();
};

struct Solution {
  /// Bindings of the query's variables.
  core::Substitution bindings;
  core::Atom goal;
  GoalTree tree;
};

/// Resumable SLD resolution: depth-first, clauses in listed order, body
/// left to right, chronological backtracking. A goal matches knowledge-
/// base clauses first, then facts of the same name in the store. Calls
/// that need an operator answer suspend the machine; `provide_answer`
/// followed by `next` resumes it.
class Solver {
 public:
  enum class State { Ready, Solution, Suspended, Exhausted };

  Solver(const core::KnowledgeBase& kb, core::FactStore& store, const BuiltinRegistry& registry, core::Atom goal,
         Limits limits = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Runs to the next solution, suspension or exhaustion.
  State next();
  State state() const { return state_; }

  const Solution& solution() const;
  /// Largest tree seen at a failure point; its failing path is marked.
  const GoalTree& failure_tree() const { return failure_; }
  const std::optional<Question>& pending_question() const { return pending_; }

  /// Records the answer to the pending question. Throws on a stale id or
  /// a kind mismatch.
  void provide_answer(std::size_t question_id, AnswerValue answer);
  /// Answers given so far, in the order they were asked.
  const std::vector<std::pair<Question, AnswerValue>>& answer_log() const { return answer_log_; }
  std::size_t solutions_found() const { return solutions_found_; }

 private:
  friend class CallContext;
  struct Machine;
  std::unique_ptr<Machine> m_;
  State state_ = State::Ready;
  std::optional<Question> pending_;
  std::vector<std::pair<Question, AnswerValue>> answer_log_;
  std::map<std::string, AnswerValue> answers_;
  std::size_t solutions_found_ = 0;
  GoalTree failure_;
  Solution solution_;
};

/// Collects every solution. Throws if the search asks the operator.
std::vector<Solution> solve_all(const core::KnowledgeBase& kb, core::FactStore& store,
                                const BuiltinRegistry& registry, const core::Atom& goal, Limits limits = {});

}  // namespace ace::inference
