#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ace/core/error.hpp"
#include "ace/scenarios/scenario.hpp"

namespace ace::gateway {

/// Error carrying an HTTP status and a stable machine-readable code.
class HttpError : public Error {
 public:
  HttpError(int status, std::string code, const std::string& message, nlohmann::json details = nlohmann::json::array())
      : Error(message), status_(status), code_(std::move(code)), details_(std::move(details)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  nlohmann::json body() const;

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

/// Headless runs ran out of scripted answers.
class AnswersExhausted : public Error {
 public:
  explicit AnswersExhausted(const std::string& question) : Error("no scripted answer for question: " + question) {}
};

/// `yes`/`no`/`true`/`false` for yes/no questions, a number otherwise.
inference::AnswerValue parse_answer(const inference::Question& q, const nlohmann::json& answer);
nlohmann::json question_json(const inference::Question& q);
nlohmann::json answer_json(const inference::AnswerValue& a);

/// One answer per line; blank lines and `#` comments are skipped.
std::vector<std::string> parse_answers_file(const std::string& text);

struct HeadlessResult {
  scenarios::ScenarioRun::State state = scenarios::ScenarioRun::State::Running;
  nlohmann::json report;  // null unless done
  nlohmann::json trace;
  std::string error;
  std::size_t answers_used = 0;
};

/// Runs to completion, feeding `answers` in order to the questions asked.
/// Throws AnswersExhausted when a question has no answer left.
HeadlessResult run_headless(const scenarios::Package& package, const scenarios::CriticalEvent& event,
                            const scenarios::ScenarioConfig& config, const core::FactStore& extra,
                            const std::vector<std::string>& answers);

/// Sessions over a package set with an append-only JSONL journal in
/// `data_dir`. Thread safe.
class SessionService {
 public:
  /// Replays `data_dir/journal.jsonl` when it exists; an empty path keeps
  /// everything in memory.
  SessionService(scenarios::PackageSet packages, std::filesystem::path data_dir = {});
  ~SessionService();

  /// Body {package?, event, facts?}. Runs until the first question or the end.
  nlohmann::json create(const nlohmann::json& body);
  nlohmann::json get(const std::string& id) const;
  /// {"state", "question"}; question is null unless awaiting an answer.
  nlohmann::json question(const std::string& id) const;
  /// Body {question_id, answer}.
  nlohmann::json answer(const std::string& id, const nlohmann::json& body);
  nlohmann::json report(const std::string& id) const;
  nlohmann::json trace(const std::string& id) const;
  /// Body {name, csv}; the table is visible to sessions created afterwards.
  nlohmann::json upload_table(const nlohmann::json& body);
  nlohmann::json packages() const;
  std::size_t session_count() const;

 private:
  struct Session;
  Session& find(const std::string& id) const;
  nlohmann::json create_locked(const nlohmann::json& body, const std::string& id);
  nlohmann::json answer_locked(Session& s, const nlohmann::json& body);
  nlohmann::json upload_locked(const nlohmann::json& body);
  void journal(const nlohmann::json& line);
  void replay();

  scenarios::PackageSet packages_;
  std::filesystem::path data_dir_;
  core::FactStore uploads_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
  bool replaying_ = false;
  mutable std::mutex mutex_;
};

/// The `/v1` HTTP API over a session service.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  /// Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Serves the `/v1` API until the process ends.
void serve(SessionService& service, const std::string& host, int port);

}  // namespace ace::gateway
