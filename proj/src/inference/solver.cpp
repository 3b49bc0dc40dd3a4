#include "ace/inference/solver.hpp"

#include <algorithm>
#include <functional>

namespace ace::inference {

using core::Atom;
using core::Term;

std::string status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Proven: return "proven";
    case NodeStatus::Failed: return "failed";
    case NodeStatus::Pending: return "pending";
  }
  return "";
}

std::vector<std::size_t> GoalTree::preorder() const {
  std::vector<std::size_t> out;
  if (nodes.empty()) return out;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    out.push_back(id);
    const auto& ch = nodes[id].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

nlohmann::json GoalTree::to_json() const {
  if (nodes.empty()) return nullptr;
  std::vector<std::size_t> index(nodes.size());
  auto order = preorder();
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i;
  std::function<nlohmann::json(std::size_t)> node = [&](std::size_t id) {
    const auto& n = nodes[id];
    nlohmann::json j{{"id", n.id},
                     {"preorder", index[id]},
                     {"atom", core::to_string(n.goal)},
                     {"status", status_name(n.status)},
                     {"clause", n.clause ? nlohmann::json(*n.clause) : nlohmann::json(nullptr)},
                     {"source", n.source}};
    j["children"] = nlohmann::json::array();
    for (auto c : n.children) j["children"].push_back(node(c));
    return j;
  };
  return node(0);
}

namespace {

struct NeedAnswer {
  Question question;
};

struct GoalCell {
  Atom goal;
  std::size_t scope = 0;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;
  std::shared_ptr<const GoalCell> next;
};
using Goals = std::shared_ptr<const GoalCell>;

struct Alternative {
  enum Kind { Clause, Fact, Tuple } kind = Clause;
  std::size_t clause = 0;
  Atom fact;
  std::vector<Term> tuple;
};

struct Choice {
  GoalCell cell;
  std::size_t trail_mark = 0;
  std::size_t node_mark = 0;
  std::size_t undo_mark = 0;
  std::vector<Alternative> alternatives;
  std::size_t next = 0;
  std::size_t node = 0;
};

Term rename(const Term& t, const std::string& suffix, std::size_t& anon) {
  switch (t.kind()) {
    case core::TermKind::Variable:
      if (t.name() == "_") return Term::variable("_" + suffix + "#" + std::to_string(anon++));
      return suffix.empty() ? t : Term::variable(t.name() + suffix);
    case core::TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(rename(a, suffix, anon));
      return Term::compound(t.name(), std::move(args));
    }
    default: return t;
  }
}

Atom rename(const Atom& a, const std::string& suffix, std::size_t& anon) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(rename(t, suffix, anon));
  return out;
}

}  // namespace

struct Solver::Machine {
  const core::KnowledgeBase& kb;
  core::FactStore& store;
  const BuiltinRegistry& registry;
  Atom query;
  Limits limits;

  core::Substitution subst;
  std::vector<std::string> trail;
  std::vector<std::function<void()>> undo;
  std::vector<GoalNode> nodes;
  std::vector<Choice> choices;
  Goals goals;
  std::size_t next_scope = 1;
  std::size_t anon = 0;
  std::vector<std::string> query_vars;
  bool need_backtrack = false;

  Machine(const core::KnowledgeBase& kb, core::FactStore& store, const BuiltinRegistry& registry, Atom goal,
          Limits limits)
      : kb(kb), store(store), registry(registry), limits(limits) {
    query = rename(goal, "", anon);
    for (const auto& a : goal.args) a.collect_variables(query_vars);
    query_vars.erase(std::remove(query_vars.begin(), query_vars.end(), "_"), query_vars.end());
    goals = std::make_shared<const GoalCell>(GoalCell{query, 0, std::nullopt, 0, nullptr});
  }

  void unwind_trail(std::size_t mark) {
    while (trail.size() > mark) {
      subst.unbind(trail.back());
      trail.pop_back();
    }
  }

  void unwind_undo(std::size_t mark) {
    while (undo.size() > mark) {
      auto fn = std::move(undo.back());
      undo.pop_back();
      fn();
    }
  }

  void truncate_nodes(std::size_t mark) {
    while (nodes.size() > mark) {
      const auto& n = nodes.back();
      if (n.parent) {
        auto& ch = nodes[*n.parent].children;
        if (!ch.empty() && ch.back() == n.id) ch.pop_back();
      }
      nodes.pop_back();
    }
  }

  /// Copy of the current tree with atoms applied and every node marked.
  GoalTree snapshot(std::optional<std::size_t> failing, const Goals& pending) const {
    GoalTree t;
    t.nodes = nodes;
    for (auto& n : t.nodes) {
      n.goal = subst.apply(n.goal);
      n.status = NodeStatus::Proven;
    }
    if (failing) {
      for (std::optional<std::size_t> id = failing; id; id = t.nodes[*id].parent) {
        t.nodes[*id].status = NodeStatus::Failed;
        t.nodes[*id].clause.reset();
        if (*id != *failing) t.nodes[*id].source.clear();
      }
      t.nodes[*failing].source.clear();
    }
    for (auto c = pending; c; c = c->next) {
      GoalNode n;
      n.id = t.nodes.size();
      n.goal = subst.apply(c->goal);
      n.status = NodeStatus::Pending;
      n.parent = c->parent;
      if (n.parent) t.nodes[*n.parent].children.push_back(n.id);
      t.nodes.push_back(std::move(n));
    }
    return t;
  }

  /// Takes the choice's next workable alternative. Pops the choice when
  /// the last one is used or none remain; returns false in the latter case.
  bool try_next(Solver& solver) {
    auto& c = choices.back();
    while (c.next < c.alternatives.size()) {
      const auto& alt = c.alternatives[c.next++];
      auto& node = nodes[c.node];
      node.clause.reset();
      node.source.clear();
      bool ok = false;
      Goals body = c.cell.next;
      if (alt.kind == Alternative::Clause) {
        const auto& clause = kb.clauses()[alt.clause];
        std::size_t scope = next_scope++;
        std::string suffix = "#" + std::to_string(scope);
        Atom head = rename(clause.head, suffix, anon);
        ok = unify_into(head.as_term(), c.cell.goal.as_term(), subst, &trail);
        if (ok) {
          node.clause = alt.clause;
          node.source = "clause";
          for (auto it = clause.body.rbegin(); it != clause.body.rend(); ++it)
            body = std::make_shared<const GoalCell>(
                GoalCell{rename(*it, suffix, anon), scope, c.node, c.cell.depth + 1, body});
        }
      } else if (alt.kind == Alternative::Fact) {
        ok = unify_into(alt.fact.as_term(), c.cell.goal.as_term(), subst, &trail);
        if (ok) node.source = "fact";
      } else {
        ok = true;
        for (std::size_t i = 0; ok && i < alt.tuple.size(); ++i)
          ok = unify_into(c.cell.goal.args[i], alt.tuple[i], subst, &trail);
        if (ok) node.source = "builtin";
      }
      if (ok) {
        goals = body;
        if (c.next == c.alternatives.size()) choices.pop_back();
        return true;
      }
      unwind_trail(c.trail_mark);
    }
    fail_goal(solver, c.node, c.cell.next);
    choices.pop_back();
    return false;
  }

  void fail_goal(Solver& solver, std::size_t node, const Goals& rest) {
    if (solver.failure_.empty() || nodes.size() >= solver.failure_.nodes.size()) {
      auto t = snapshot(node, rest);
      if (solver.failure_.empty() || t.nodes.size() > solver.failure_.nodes.size()) solver.failure_ = std::move(t);
    }
  }

  void restore(Choice& c) {
    unwind_trail(c.trail_mark);
    unwind_undo(c.undo_mark);
    truncate_nodes(c.node_mark);
  }

  bool backtrack(Solver& solver) {
    while (!choices.empty()) {
      restore(choices.back());
      if (try_next(solver)) return true;
    }
    return false;
  }

  Solver::State run(Solver& solver) {
    for (;;) {
      if (need_backtrack) {
        need_backtrack = false;
        if (!backtrack(solver)) return Solver::State::Exhausted;
      }
      if (!goals) {
        need_backtrack = true;
        return Solver::State::Solution;
      }
      Goals cell = goals;
      if (cell->depth > limits.max_depth) {
        std::size_t id = nodes.size();
        nodes.push_back(GoalNode{id, cell->goal, NodeStatus::Pending, std::nullopt, "", cell->parent, {}});
        if (cell->parent) nodes[*cell->parent].children.push_back(id);
        auto tree = snapshot(id, nullptr);
        throw InferenceError("depth limit " + std::to_string(limits.max_depth) + " exceeded at goal " +
                                 core::to_string(subst.apply(cell->goal)),
                             std::move(tree));
      }
      std::size_t id = nodes.size();
      nodes.push_back(GoalNode{id, cell->goal, NodeStatus::Proven, std::nullopt, "", cell->parent, {}});
      if (cell->parent) nodes[*cell->parent].children.push_back(id);

      Choice choice;
      choice.cell = *cell;
      choice.node = id;
      choice.node_mark = id + 1;
      choice.trail_mark = trail.size();
      Atom applied = subst.apply(cell->goal);
      const std::string& name = applied.predicate;
      std::size_t arity = applied.arity();

      if (const Builtin* b = registry.find(name, arity)) {
        for (std::size_t i = 0; i < arity && i < b->modes.size(); ++i)
          if (b->modes[i] == '+' && !applied.args[i].is_ground())
            throw InferenceError("builtin " + name + "/" + std::to_string(arity) + ": argument " +
                                     std::to_string(i + 1) + " must be bound",
                                 snapshot(id, cell->next));
        std::size_t undo_mark = undo.size();
        CallContext ctx(solver, store, kb, cell->scope, id);
        Answers answers;
        try {
          answers = b->handler(applied.args, ctx);
        } catch (const NeedAnswer& need) {
          unwind_undo(undo_mark);
          truncate_nodes(id);
          solver.pending_ = need.question;
          return Solver::State::Suspended;
        } catch (const InferenceError&) {
          throw;
        } catch (const Error& e) {
          throw InferenceError("builtin " + name + "/" + std::to_string(arity) + ": " + e.what(),
                               snapshot(id, cell->next));
        }
        for (auto& tuple : answers) {
          if (tuple.size() != arity)
            throw InferenceError("builtin " + name + "/" + std::to_string(arity) + " returned a tuple of size " +
                                     std::to_string(tuple.size()),
                                 snapshot(id, cell->next));
          choice.alternatives.push_back({Alternative::Tuple, 0, {}, std::move(tuple)});
        }
      } else {
        for (auto idx : kb.clauses_for(name, arity)) choice.alternatives.push_back({Alternative::Clause, idx, {}, {}});
        for (const auto& f : store.relation(name))
          if (f.arity() == arity) choice.alternatives.push_back({Alternative::Fact, 0, f, {}});
      }
      choice.undo_mark = undo.size();
      choices.push_back(std::move(choice));
      if (!try_next(solver)) need_backtrack = true;
    }
  }

  Solution make_solution() const {
    Solution s;
    for (const auto& v : query_vars) {
      Term value = subst.apply(Term::variable(v));
      s.bindings.bind(v, value);
    }
    s.goal = subst.apply(query);
    s.tree = snapshot(std::nullopt, nullptr);
    return s;
  }
};

std::optional<Term> CallContext::variable(const std::string& name) const {
  std::string key = scope_ == 0 ? name : name + "#" + std::to_string(scope_);
  const auto& s = solver_.m_->subst;
  Term v = s.apply(Term::variable(key));
  if (v.is_variable() && v.name() == key) return std::nullopt;
  return v;
}

bool CallContext::ask_yes_no(const std::string& question) {
  auto it = solver_.answers_.find(question);
  if (it != solver_.answers_.end() && it->second.kind == QuestionKind::YesNo) return it->second.yes;
  throw NeedAnswer{Question{solver_.answer_log_.size() + 1, question, QuestionKind::YesNo}};
}

double CallContext::ask_number(const std::string& question) {
  auto it = solver_.answers_.find(question);
  if (it != solver_.answers_.end() && it->second.kind == QuestionKind::Number) return it->second.number;
  throw NeedAnswer{Question{solver_.answer_log_.size() + 1, question, QuestionKind::Number}};
}

void CallContext::on_undo(std::function<void()> undo) { solver_.m_->undo.push_back(std::move(undo)); }

Solver::Solver(const core::KnowledgeBase& kb, core::FactStore& store, const BuiltinRegistry& registry, Atom goal,
               Limits limits) {
  for (const auto& [name, arity] : registry.names())
    if (kb.defines(name, arity))
      throw Error("predicate " + name + "/" + std::to_string(arity) + " is both a builtin and defined in the knowledge base");
  m_ = std::make_unique<Machine>(kb, store, registry, std::move(goal), limits);
}

Solver::~Solver() = default;

Solver::State Solver::next() {
  if (state_ == State::Suspended) throw Error("solver is waiting for an answer");
  if (state_ == State::Exhausted) return state_;
  if (state_ == State::Solution && solutions_found_ >= m_->limits.max_solutions) return state_ = State::Exhausted;
  state_ = m_->run(*this);
  if (state_ == State::Solution) {
    ++solutions_found_;
    solution_ = m_->make_solution();
  } else if (state_ == State::Exhausted && failure_.empty()) {
    failure_ = m_->snapshot(std::nullopt, nullptr);
  }
  return state_;
}

const Solution& Solver::solution() const {
  if (solutions_found_ == 0) throw Error("no solution has been found");
  return solution_;
}

void Solver::provide_answer(std::size_t question_id, AnswerValue answer) {
  if (state_ != State::Suspended || !pending_) throw Error("no question is pending");
  if (question_id != pending_->id)
    throw Error("answer for question " + std::to_string(question_id) + " but question " + std::to_string(pending_->id) +
                " is pending");
  if (answer.kind != pending_->kind)
    throw Error(pending_->kind == QuestionKind::YesNo ? "question expects a yes/no answer"
                                                      : "question expects a numeric answer");
  answers_[pending_->text] = answer;
  answer_log_.emplace_back(*pending_, answer);
  pending_.reset();
  state_ = State::Ready;
}

std::vector<Solution> solve_all(const core::KnowledgeBase& kb, core::FactStore& store, const BuiltinRegistry& registry,
                                const core::Atom& goal, Limits limits) {
  Solver solver(kb, store, registry, goal, limits);
  std::vector<Solution> out;
  for (;;) {
    auto s = solver.next();
    if (s == Solver::State::Solution) {
      out.push_back(solver.solution());
    } else if (s == Solver::State::Suspended) {
      throw Error("goal " + core::to_string(goal) + " asks the operator: " + solver.pending_question()->text);
    } else {
      return out;
    }
  }
}

}  // namespace ace::inference
