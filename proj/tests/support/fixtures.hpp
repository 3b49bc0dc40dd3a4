#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/core/error.hpp"
#include "ace/gateway/gateway.hpp"
#include "ace/scenarios/scenario.hpp"

namespace ace::fixtures {

inline std::filesystem::path root() { return std::filesystem::path(ACE_SOURCE_DIR); }
inline std::filesystem::path manifest() { return root() / "kb" / "packages.json"; }
inline std::filesystem::path dir(const std::string& name) { return root() / "tests" / "fixtures" / name; }

inline const scenarios::PackageSet& packages() {
  static const scenarios::PackageSet set = scenarios::PackageSet::load(manifest());
  return set;
}

struct Fixture {
  scenarios::CriticalEvent event;
  nlohmann::json event_json;
  core::FactStore data;
  std::string data_text;
  std::vector<std::string> answers;
};

inline Fixture load(const std::string& name) {
  Fixture f;
  f.event_json = nlohmann::json::parse(core::read_file(dir(name) / "event.json"));
  f.event = scenarios::CriticalEvent::from_json(f.event_json);
  f.data_text = core::read_file(dir(name) / "data.facts");
  f.data = core::parse_store(f.data_text, name);
  f.answers = gateway::parse_answers_file(core::read_file(dir(name) / "answers.txt"));
  return f;
}

/// Runs a fixture through the package chosen by its category.
inline gateway::HeadlessResult run(const std::string& name) {
  auto f = load(name);
  const auto& set = packages();
  return gateway::run_headless(set.for_category(f.event.category), f.event, set.config, f.data, f.answers);
}

}  // namespace ace::fixtures
