#include <gtest/gtest.h>
#include <httplib.h>

#include <fstream>
#include <random>
#include <thread>

#include "ace/gateway/gateway.hpp"
#include "ace/gateway/models.hpp"
#include "fixtures.hpp"

using namespace ace;
using namespace ace::gateway;
using nlohmann::json;

namespace {

json request(const std::string& fixture) {
  auto f = fixtures::load(fixture);
  return {{"event", f.event_json}, {"facts", f.data_text}};
}

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const HttpError& e) {
    return e.status();
  }
  return 200;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int n = 0;
    path = std::filesystem::temp_directory_path() /
           ("ace-gw-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST(Answers, ParsingByQuestionKind) {
  inference::Question yn{1, "q", inference::QuestionKind::YesNo};
  inference::Question num{2, "n", inference::QuestionKind::Number};
  EXPECT_TRUE(parse_answer(yn, "Yes").yes);
  EXPECT_FALSE(parse_answer(yn, false).yes);
  EXPECT_THROW(parse_answer(yn, 3), Error);
  EXPECT_DOUBLE_EQ(parse_answer(num, "2.5").number, 2.5);
  EXPECT_THROW(parse_answer(num, "2.5x"), Error);
  EXPECT_EQ(parse_answers_file("# c\n yes \n\n4\n"), (std::vector<std::string>{"yes", "4"}));
}

TEST(Headless, ExhaustedAnswersThrow) {
  auto f = fixtures::load("fire_question");
  const auto& set = fixtures::packages();
  EXPECT_THROW(run_headless(set.get("production"), f.event, set.config, f.data, {}), AnswersExhausted);
  auto r = run_headless(set.get("production"), f.event, set.config, f.data, {"yes"});
  EXPECT_EQ(r.state, scenarios::ScenarioRun::State::Done);
  EXPECT_EQ(r.answers_used, 1u);
}

TEST(Sessions, LifecycleAndErrors) {
  SessionService svc(fixtures::packages());
  auto done = svc.create(request("blast_furnace"));
  EXPECT_EQ(done["state"], "done");
  EXPECT_EQ(svc.report(done["id"])["package"], "production");
  EXPECT_EQ(status_of([&] { svc.answer(done["id"], {{"question_id", 1}, {"answer", "yes"}}); }), 409);

  auto s = svc.create(request("fire_question"));
  std::string id = s["id"];
  EXPECT_EQ(s["state"], "awaiting-answer");
  auto q = svc.question(id)["question"];
  EXPECT_EQ(q["kind"], "yes-no");
  EXPECT_EQ(status_of([&] { svc.report(id); }), 409);
  EXPECT_EQ(status_of([&] { svc.answer(id, {{"question_id", 99}, {"answer", "yes"}}); }), 409);
  EXPECT_EQ(status_of([&] { svc.answer(id, {{"question_id", q["id"]}, {"answer", 7}}); }), 400);
  EXPECT_EQ(status_of([&] { svc.answer(id, {{"answer", "yes"}}); }), 400);
  auto after = svc.answer(id, {{"question_id", q["id"]}, {"answer", "yes"}});
  EXPECT_EQ(after["state"], "done");
  EXPECT_TRUE(svc.question(id)["question"].is_null());
  EXPECT_FALSE(svc.trace(id)["goal_tree"].is_null());

  EXPECT_EQ(status_of([&] { svc.get("nope"); }), 404);
  EXPECT_EQ(status_of([&] { svc.create(json::parse(R"({"event": {"id": "x"}})")); }), 422);
  EXPECT_EQ(status_of([&] { svc.create({{"package", "zzz"}, {"event", request("blast_furnace")["event"]}}); }), 404);
  EXPECT_EQ(status_of([&] { svc.create(json::array()); }), 400);
  try {
    svc.create({{"event", {{"id", "x"}, {"category", "region"}}}});
  } catch (const HttpError& e) {
    EXPECT_EQ(e.body()["error"]["code"], "invalid_event");
    EXPECT_EQ(e.body()["error"]["details"], json({"subtype: required"}));
  }
  EXPECT_EQ(svc.packages()["packages"].size(), 3u);
}

TEST(Sessions, UploadedTablesReachLaterSessions) {
  SessionService svc(fixtures::packages());
  auto f = fixtures::load("region_customs");
  json body{{"event", f.event_json}};
  EXPECT_EQ(svc.report(svc.create(body)["id"])["region"]["consequences"]["products"].size(), 0u);
  auto up = svc.upload_table({{"name", "cost_structure"},
                              {"csv", "label,components,materials,labour,energy,logistics,imported,price\n"
                                      "steel,4,2,1.5,1,0.5,3,10\n"}});
  EXPECT_EQ(up["rows"], 1);
  auto rep = svc.report(svc.create(body)["id"]);
  EXPECT_EQ(rep["region"]["consequences"]["unprofitable"], json({"steel"}));
  EXPECT_EQ(status_of([&] { svc.upload_table({{"name", "bad name"}, {"csv", "a,b\n"}}); }), 400);
}

TEST(Sessions, JournalReplayRestoresSessions) {
  TempDir dir;
  json report, pending;
  std::string done_id, waiting_id;
  {
    SessionService svc(fixtures::packages(), dir.path);
    done_id = svc.create(request("blast_furnace"))["id"];
    auto s = svc.create(request("fire_question"));
    auto answered = svc.create(request("fire_question"));
    svc.answer(answered["id"], {{"question_id", answered["question"]["id"]}, {"answer", "yes"}});
    waiting_id = s["id"];
    report = svc.report(answered["id"]);
    pending = svc.get(waiting_id);
  }
  {
    std::ofstream torn(dir.path / "journal.jsonl", std::ios::app);
    torn << "{\"type\":\"answ";
  }
  SessionService back(fixtures::packages(), dir.path);
  EXPECT_EQ(back.session_count(), 3u);
  EXPECT_EQ(back.get(done_id)["state"], "done");
  EXPECT_EQ(back.get(waiting_id), pending);
  EXPECT_EQ(back.report("s3").dump(), report.dump());
  EXPECT_EQ(back.create(request("blast_furnace"))["id"], "s4");
}

TEST(SessionProperty, StateMachineUnderRandomOperations) {
  SessionService svc(fixtures::packages());
  std::mt19937 rng(7);
  const json answers[] = {"yes", "no", true, 3, "maybe", nullptr};
  for (int round = 0; round < 150; ++round) {
    std::string id = svc.create(request(rng() % 3 ? "fire_question" : "blast_furnace"))["id"];
    std::string state = svc.get(id)["state"];
    std::size_t answered = 0;
    for (int step = 0; step < 6; ++step) {
      auto before = svc.get(id);
      json qid = before["question"].is_null() ? json(1 + rng() % 3) : before["question"]["id"];
      if (rng() % 4 == 0) qid = qid.get<std::size_t>() + 1;
      json body{{"question_id", qid}, {"answer", answers[rng() % 6]}};
      int status = status_of([&] { svc.answer(id, body); });
      auto now = svc.get(id);
      std::string next = now["state"];
      if (state != "awaiting-answer") {
        EXPECT_EQ(status, 409);
        EXPECT_EQ(next, state);
      } else if (status != 200) {
        EXPECT_EQ(now, before);
      } else {
        ++answered;
        EXPECT_TRUE(next == "done" || next == "failed" || next == "awaiting-answer");
      }
      EXPECT_EQ(now["answers"], answered);
      EXPECT_EQ(now["question"].is_null(), next != "awaiting-answer");
      EXPECT_EQ(status_of([&] { svc.report(id); }) == 200, next == "done");
      EXPECT_EQ(now["error"].is_null(), next != "failed");
      state = next;
    }
  }
}

TEST(Http, EndToEndOverLoopback) {
  SessionService svc(fixtures::packages());
  HttpServer server(svc);
  int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);
  for (int i = 0; i < 100 && !cli.Get("/v1/packages"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  auto res = cli.Post("/v1/sessions", request("fire_question").dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto s = json::parse(res->body);
  std::string id = s["id"];
  auto q = json::parse(cli.Get("/v1/sessions/" + id + "/question")->body);
  EXPECT_EQ(q["state"], "awaiting-answer");
  EXPECT_EQ(cli.Get("/v1/sessions/" + id + "/report")->status, 409);
  auto ans = cli.Post("/v1/sessions/" + id + "/answer",
                      json{{"question_id", q["question"]["id"]}, {"answer", "yes"}}.dump(), "application/json");
  EXPECT_EQ(ans->status, 200);
  auto rep = cli.Get("/v1/sessions/" + id + "/report");
  EXPECT_EQ(rep->status, 200);
  EXPECT_EQ(json::parse(rep->body)["schema_version"], "1.0");
  EXPECT_EQ(cli.Get("/v1/sessions/" + id + "/trace")->status, 200);
  EXPECT_EQ(cli.Get("/v1/sessions/zzz")->status, 404);
  auto bad = cli.Post("/v1/sessions", "{not json", "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(json::parse(bad->body)["error"]["code"], "invalid_json");
  auto csv = cli.Post("/v1/data/tables?name=fx_rate", "label,y\nw1,60\nw2,63\n", "text/csv");
  EXPECT_EQ(csv->status, 201);
  EXPECT_EQ(cli.Get("/v1/nothing")->status, 404);
  server.stop();
  t.join();
}

TEST(Models, FitAndClassifyRoundTrip) {
  auto t = read_csv_table("label,class,a,b\nr1,1,1,1\nr2,1,1,-1\nr3,2,-1,1\nr4,2,-1,-1\n");
  auto in = read_csv_table("label,a,b\nq1,1,0\nq2,-1,0\n");
  for (const char* kind : {"plane", "surface", "freq", "potential"}) {
    auto model = fit_model(kind, t);
    auto out = classify_rows(json::parse(model.dump()), in);
    ASSERT_EQ(out.size(), 2u) << kind;
    EXPECT_EQ(out[0]["class"], 1) << kind;
    EXPECT_EQ(out[1]["class"], 2) << kind;
  }
  auto reg = fit_model("regression", read_csv_table("label,y,x\na,1,0\nb,3,1\nc,5,2\n"));
  EXPECT_NEAR(reg["coefficients"][0].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(reg["coefficients"][1].get<double>(), 2.0, 1e-9);
  auto dyn = fit_model("dynamical", read_csv_table("label,y\na,1\nb,2\nc,4\nd,8\n"), {2, 1, 0});
  EXPECT_NEAR(dyn["a"][0].get<double>(), 2.0, 1e-9);
  EXPECT_THROW(classify_rows(reg, in), Error);
  EXPECT_THROW(fit_model("nope", t), Error);
  EXPECT_THROW(experience_table(read_csv_table("label,class,a\nr,1,0.5\n")), Error);
}
