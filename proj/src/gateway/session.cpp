#include <algorithm>
#include <fstream>
#include <sstream>

#include "ace/gateway/gateway.hpp"

namespace ace::gateway {

using nlohmann::json;
using scenarios::ScenarioRun;

json HttpError::body() const { return {{"error", {{"code", code_}, {"message", what()}, {"details", details_}}}}; }

inference::AnswerValue parse_answer(const inference::Question& q, const json& a) {
  if (q.kind == inference::QuestionKind::YesNo) {
    if (a.is_boolean()) return inference::AnswerValue::yes_no(a.get<bool>());
    if (a.is_string()) {
      auto s = a.get<std::string>();
      std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
      if (s == "yes" || s == "true" || s == "y") return inference::AnswerValue::yes_no(true);
      if (s == "no" || s == "false" || s == "n") return inference::AnswerValue::yes_no(false);
    }
    throw Error("question " + std::to_string(q.id) + " expects yes or no");
  }
  if (a.is_number()) return inference::AnswerValue::numeric(a.get<double>());
  if (a.is_string()) {
    try {
      std::size_t used = 0;
      auto s = a.get<std::string>();
      double v = std::stod(s, &used);
      if (used == s.size() && std::isfinite(v)) return inference::AnswerValue::numeric(v);
    } catch (const std::exception&) {
    }
  }
  throw Error("question " + std::to_string(q.id) + " expects a number");
}

json question_json(const inference::Question& q) {
  return {{"id", q.id}, {"text", q.text}, {"kind", q.kind == inference::QuestionKind::YesNo ? "yes-no" : "number"}};
}

json answer_json(const inference::AnswerValue& a) {
  if (a.kind == inference::QuestionKind::YesNo) return a.yes ? "yes" : "no";
  return a.number;
}

std::vector<std::string> parse_answers_file(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

HeadlessResult run_headless(const scenarios::Package& package, const scenarios::CriticalEvent& event,
                            const scenarios::ScenarioConfig& config, const core::FactStore& extra,
                            const std::vector<std::string>& answers) {
  ScenarioRun run(package, event, config, extra);
  HeadlessResult r;
  while (true) {
    auto st = run.advance();
    if (st != ScenarioRun::State::AwaitingAnswer) break;
    const auto& q = *run.pending_question();
    if (r.answers_used >= answers.size()) throw AnswersExhausted(q.text);
    run.provide_answer(q.id, parse_answer(q, answers[r.answers_used++]));
  }
  r.state = run.state();
  if (r.state == ScenarioRun::State::Done) r.report = run.report();
  r.trace = run.trace();
  r.error = run.error();
  return r;
}

// ---------------------------------------------------------------------------

struct SessionService::Session {
  std::string id;
  std::string package;
  std::string event_id;
  std::unique_ptr<ScenarioRun> run;
};

SessionService::SessionService(scenarios::PackageSet packages, std::filesystem::path data_dir)
    : packages_(std::move(packages)), data_dir_(std::move(data_dir)) {
  if (!data_dir_.empty()) {
    std::filesystem::create_directories(data_dir_);
    replay();
  }
}

SessionService::~SessionService() = default;

void SessionService::journal(const json& line) {
  if (data_dir_.empty() || replaying_) return;
  std::ofstream out(data_dir_ / "journal.jsonl", std::ios::app);
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw Error("cannot append to the session journal");
}

void SessionService::replay() {
  std::ifstream in(data_dir_ / "journal.jsonl");
  if (!in) return;
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);)
    if (!l.empty()) lines.push_back(l);
  replaying_ = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::exception&) {
      if (i + 1 == lines.size()) break;  // torn final write
      replaying_ = false;
      throw Error("session journal line " + std::to_string(i + 1) + " is corrupt");
    }
    auto type = j.value("type", "");
    if (type == "created") {
      create_locked(j.at("body"), j.at("id").get<std::string>());
    } else if (type == "answer") {
      auto it = sessions_.find(j.at("id").get<std::string>());
      if (it != sessions_.end()) answer_locked(*it->second, j.at("body"));
    } else if (type == "table") {
      upload_locked(j.at("body"));
    }
  }
  replaying_ = false;
}

namespace {

json session_json(const ScenarioRun& run, const std::string& id, const std::string& package,
                  const std::string& event_id) {
  json q = nullptr;
  if (run.state() == ScenarioRun::State::AwaitingAnswer) q = question_json(*run.pending_question());
  return {{"id", id},
          {"package", package},
          {"event_id", event_id},
          {"state", scenarios::state_name(run.state())},
          {"question", q},
          {"answers", run.answer_log().size()},
          {"error", run.state() == ScenarioRun::State::Failed ? json(run.error()) : json(nullptr)}};
}

}  // namespace

json SessionService::create(const json& body) {
  std::lock_guard lock(mutex_);
  return create_locked(body, "s" + std::to_string(next_id_));
}

json SessionService::create_locked(const json& body, const std::string& id) {
  if (!body.is_object()) throw HttpError(400, "invalid_request", "request body must be a JSON object");
  if (!body.contains("event")) throw HttpError(400, "invalid_request", "request needs an 'event'");
  scenarios::CriticalEvent event;
  try {
    event = scenarios::CriticalEvent::from_json(body["event"]);
  } catch (const scenarios::SchemaError& e) {
    throw HttpError(422, "invalid_event", e.what(), e.problems());
  }
  const scenarios::Package* pkg = nullptr;
  try {
    if (body.contains("package")) {
      if (!body["package"].is_string()) throw HttpError(400, "invalid_request", "'package' must be a string");
      pkg = &packages_.get(body["package"].get<std::string>());
    } else {
      pkg = &packages_.for_category(event.category);
    }
  } catch (const HttpError&) {
    throw;
  } catch (const Error& e) {
    throw HttpError(404, "unknown_package", e.what());
  }
  core::FactStore extra = uploads_;
  if (body.contains("facts")) {
    if (!body["facts"].is_string()) throw HttpError(400, "invalid_request", "'facts' must be a string");
    try {
      extra.merge(core::parse_store(body["facts"].get<std::string>(), "facts"));
    } catch (const Error& e) {
      throw HttpError(400, "invalid_facts", e.what());
    }
  }
  auto s = std::make_unique<Session>();
  s->id = id;
  s->package = pkg->name;
  s->event_id = event.id;
  s->run = std::make_unique<ScenarioRun>(*pkg, std::move(event), packages_.config, std::move(extra));
  journal({{"type", "created"}, {"id", id}, {"body", body}});
  s->run->advance();
  auto out = session_json(*s->run, s->id, s->package, s->event_id);
  journal({{"type", out["state"]}, {"id", id}});
  sessions_[id] = std::move(s);
  std::uint64_t n = std::stoull(id.substr(1));
  next_id_ = std::max(next_id_, n + 1);
  return out;
}

SessionService::Session& SessionService::find(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw HttpError(404, "unknown_session", "no session '" + id + "'");
  return *it->second;
}

json SessionService::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto& s = find(id);
  return session_json(*s.run, s.id, s.package, s.event_id);
}

json SessionService::question(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto& s = find(id);
  json q = nullptr;
  if (s.run->state() == ScenarioRun::State::AwaitingAnswer) q = question_json(*s.run->pending_question());
  return {{"state", scenarios::state_name(s.run->state())}, {"question", q}};
}

json SessionService::answer(const std::string& id, const json& body) {
  std::lock_guard lock(mutex_);
  return answer_locked(find(id), body);
}

json SessionService::answer_locked(Session& s, const json& body) {
  auto& run = *s.run;
  if (run.state() != ScenarioRun::State::AwaitingAnswer)
    throw HttpError(409, "not_awaiting_answer", "session '" + s.id + "' is " + scenarios::state_name(run.state()));
  if (!body.is_object() || !body.contains("question_id") || !body["question_id"].is_number_integer() ||
      body["question_id"].get<std::int64_t>() < 0 ||
      !body.contains("answer"))
    throw HttpError(400, "invalid_request", "answer needs 'question_id' and 'answer'");
  const auto& q = *run.pending_question();
  auto qid = body["question_id"].get<std::size_t>();
  if (qid != q.id)
    throw HttpError(409, "stale_question",
                    "question " + std::to_string(qid) + " is not pending; pending is " + std::to_string(q.id));
  inference::AnswerValue a;
  try {
    a = parse_answer(q, body["answer"]);
  } catch (const Error& e) {
    throw HttpError(400, "invalid_answer", e.what());
  }
  run.provide_answer(qid, a);
  journal({{"type", "answer"}, {"id", s.id}, {"body", body}});
  run.advance();
  auto out = session_json(run, s.id, s.package, s.event_id);
  journal({{"type", out["state"]}, {"id", s.id}});
  return out;
}

json SessionService::report(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto& s = find(id);
  if (s.run->state() != ScenarioRun::State::Done)
    throw HttpError(409, "report_not_ready", "session '" + id + "' is " + scenarios::state_name(s.run->state()));
  return s.run->report();
}

json SessionService::trace(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto& s = find(id);
  return {{"state", scenarios::state_name(s.run->state())}, {"goal_tree", s.run->trace()}};
}

json SessionService::upload_table(const json& body) {
  std::lock_guard lock(mutex_);
  return upload_locked(body);
}

json SessionService::upload_locked(const json& body) {
  if (!body.is_object() || !body.contains("name") || !body["name"].is_string() || !body.contains("csv") ||
      !body["csv"].is_string())
    throw HttpError(400, "invalid_request", "table upload needs string fields 'name' and 'csv'");
  auto name = body["name"].get<std::string>();
  if (!core::is_identifier(name)) throw HttpError(400, "invalid_table", "table name must be an identifier");
  core::FactStore parsed;
  try {
    parsed = core::parse_store("table " + name + ":\n" + body["csv"].get<std::string>() + "\n", name + ".csv");
  } catch (const Error& e) {
    throw HttpError(400, "invalid_table", e.what());
  }
  const auto* t = parsed.table(name);
  if (!t) throw HttpError(400, "invalid_table", "table '" + name + "' has no header");
  uploads_.merge(parsed);
  journal({{"type", "table"}, {"body", body}});
  return {{"name", name}, {"columns", t->columns}, {"rows", t->rows.size()}};
}

json SessionService::packages() const {
  std::lock_guard lock(mutex_);
  json out = json::array();
  for (const auto& [name, p] : packages_.packages()) {
    json files = json::array();
    for (const auto& f : p.files) files.push_back(f.filename().string());
    out.push_back({{"name", name},
                   {"goal", p.goal},
                   {"categories", p.categories},
                   {"files", files},
                   {"clauses", p.kb.clauses().size()},
                   {"tables", p.data.table_names()}});
  }
  return {{"packages", out}, {"config", packages_.config.to_json()}};
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace ace::gateway
