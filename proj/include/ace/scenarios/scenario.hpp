#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/core/error.hpp"
#include "ace/core/fact_store.hpp"
#include "ace/core/knowledge_base.hpp"
#include "ace/inference/solver.hpp"
#include "ace/scenarios/operations.hpp"

namespace ace::scenarios {

inline constexpr const char* kReportSchemaVersion = "1.0";

/// Event document that fails validation; one message per offending field.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct Measurement {
  double value = 0.0;
  std::string unit;
};

struct CriticalEvent {
  std::string id;
  std::string category;  // production, market, region
  std::string subtype;
  /// "occurred" for an actual event, "threat" for warning signals only.
  std::string phase = "occurred";
  std::string timestamp;
  std::string title;
  std::string narrative;
  std::vector<std::string> tags;
  std::vector<std::string> assets;
  std::map<std::string, Measurement> measurements;
  /// Threat signal model, see README.
  nlohmann::json signals;

  /// Validates every field and throws SchemaError listing all problems.
  static CriticalEvent from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Subtypes accepted for a category; empty for an unknown category.
const std::vector<std::string>& valid_subtypes(const std::string& category);
/// `fire-extinguished` becomes the symbol `fire_extinguished`.
std::string tag_symbol(const std::string& tag);

struct Package {
  std::string name;
  std::string goal;
  std::vector<std::string> categories;
  std::vector<std::filesystem::path> files;
  core::KnowledgeBase kb;
  /// Tables and facts shipped with the package.
  core::FactStore data;
};

/// Loads `.kb` files (rules and tables) and fact-store files into one
/// knowledge base and one store, in the given order.
void load_sources(const std::vector<std::filesystem::path>& paths, core::KnowledgeBase& kb, core::FactStore& store);

class PackageSet {
 public:
  /// Reads a `packages.json` manifest; file paths are relative to it.
  static PackageSet load(const std::filesystem::path& manifest);
  void add(Package package);

  const Package& get(const std::string& name) const;
  const Package& for_category(const std::string& category) const;
  std::vector<std::string> names() const;
  const std::map<std::string, Package>& packages() const { return packages_; }

  ScenarioConfig config;

 private:
  std::map<std::string, Package> packages_;
};

/// Goal atom posed for a package: `<goal>` with no arguments.
std::string package_goal(const Package& package);

/// One scenario session: poses the package goal for the event and collects
/// the report while the proof runs. Suspends on operator questions.
class ScenarioRun {
 public:
  enum class State { Running, AwaitingAnswer, Done, Failed };

  ScenarioRun(const Package& package, CriticalEvent event, ScenarioConfig config = {}, core::FactStore extra = {});
  ~ScenarioRun();
  ScenarioRun(const ScenarioRun&) = delete;
  ScenarioRun& operator=(const ScenarioRun&) = delete;

  /// Runs until done, failed or a question is pending.
  State advance();
  State state() const { return state_; }
  const std::optional<inference::Question>& pending_question() const;
  void provide_answer(std::size_t question_id, inference::AnswerValue answer);
  const std::vector<std::pair<inference::Question, inference::AnswerValue>>& answer_log() const;

  /// Present once done.
  const nlohmann::json& report() const;
  /// Goal tree of the proof, or of the failure point.
  nlohmann::json trace() const;
  /// Message when failed.
  const std::string& error() const { return error_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  State state_ = State::Running;
  std::string error_;
};

std::string state_name(ScenarioRun::State s);

/// Builtins used by the shipped packages, on top of the standard registry.
/// `run_state` is owned by the run that registers them.
struct RunState;
inference::BuiltinRegistry scenario_registry(RunState& run_state);

}  // namespace ace::scenarios
