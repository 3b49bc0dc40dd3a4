#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "ace/core/knowledge_base.hpp"
#include "ace/gateway/gateway.hpp"
#include "ace/gateway/models.hpp"
#include "ace/lang/parser.hpp"

using namespace ace;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInference = 3, kSchema = 4, kAnswers = 5 };

std::string slurp(const std::string& path) { return core::read_file(path); }

void write_json(const std::string& path, const json& j) {
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("cannot write " + path);
}

json read_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::string default_goal(const std::string& category) {
  if (category == "production") return "production_event";
  if (category == "market") return "market_event";
  if (category == "region") return "regional_event";
  throw Error("no default goal for category '" + category + "'");
}

struct RunArgs {
  std::vector<std::string> kb;
  std::string manifest, package, goal, event, answers, trace, report = "-";
};

int cmd_run(const RunArgs& a) {
  auto event = scenarios::CriticalEvent::from_json(read_json(a.event));
  scenarios::ScenarioConfig config;
  scenarios::Package adhoc;
  const scenarios::Package* pkg = &adhoc;
  std::optional<scenarios::PackageSet> set;
  core::FactStore extra;
  std::vector<std::filesystem::path> files(a.kb.begin(), a.kb.end());
  if (!a.manifest.empty()) {
    set = scenarios::PackageSet::load(a.manifest);
    config = set->config;
    pkg = a.package.empty() ? &set->for_category(event.category) : &set->get(a.package);
    core::KnowledgeBase ignored;
    scenarios::load_sources(files, ignored, extra);
    if (!ignored.clauses().empty()) throw Error("--kb files add rules; with --packages only data files are allowed");
  } else {
    if (files.empty()) throw CLI::ValidationError("run", "--kb or --packages is required");
    adhoc.name = a.package.empty() ? "adhoc" : a.package;
    adhoc.files = files;
    scenarios::load_sources(files, adhoc.kb, adhoc.data);
  }
  if (!a.goal.empty()) {
    if (pkg != &adhoc) {
      adhoc = *pkg;
      pkg = &adhoc;
    }
    adhoc.goal = a.goal;
  } else if (pkg == &adhoc) {
    adhoc.goal = default_goal(event.category);
  }
  std::vector<std::string> answers;
  if (!a.answers.empty()) answers = gateway::parse_answers_file(slurp(a.answers));
  auto r = gateway::run_headless(*pkg, event, config, extra, answers);
  if (!a.trace.empty()) write_json(a.trace, r.trace);
  if (r.state != scenarios::ScenarioRun::State::Done) {
    std::cerr << "ace: " << r.error << '\n';
    return kInference;
  }
  write_json(a.report, r.report);
  return kOk;
}

int cmd_fit(const std::string& kind, const std::string& in, const std::string& out, gateway::FitOptions o) {
  auto table = gateway::read_csv_table(slurp(in), "input");
  write_json(out, gateway::fit_model(kind, table, o));
  return kOk;
}

int cmd_classify(const std::string& model, const std::string& in, const std::string& out) {
  auto rows = gateway::classify_rows(read_json(model), gateway::read_csv_table(slurp(in), "input"));
  write_json(out, rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-event analysis with knowledge packages"};
  app.require_subcommand(1);

  RunArgs run;
  auto* r = app.add_subcommand("run", "Run one event through a knowledge package");
  r->add_option("--kb", run.kb, "Rule (.kb) and data (.facts) files")->check(CLI::ExistingFile);
  r->add_option("--packages", run.manifest, "packages.json manifest")->check(CLI::ExistingFile);
  r->add_option("--package", run.package, "Package name (default: by event category)");
  r->add_option("--goal", run.goal, "Goal predicate (default: by event category)");
  r->add_option("--event", run.event, "Event JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--answers", run.answers, "Scripted answers, one per line")->check(CLI::ExistingFile);
  r->add_option("--trace", run.trace, "Write the goal tree JSON here");
  r->add_option("--report", run.report, "Write the report JSON here (- for stdout)");

  std::string manifest, data_dir, host = "127.0.0.1";
  int port = 8080;
  auto* s = app.add_subcommand("serve", "Serve the HTTP API");
  s->add_option("--packages", manifest, "packages.json manifest")->required()->check(CLI::ExistingFile);
  s->add_option("--data", data_dir, "Directory for the session journal");
  s->add_option("--host", host, "Bind address");
  s->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

  std::string kind, in, out = "-", model;
  gateway::FitOptions fo;
  auto* f = app.add_subcommand("fit", "Fit a classifier or predictor from CSV");
  f->add_option("--kind", kind, "plane|surface|freq|potential|regression|dynamical")
      ->required()
      ->check(CLI::IsMember({"plane", "surface", "freq", "potential", "regression", "dynamical"}));
  f->add_option("--in", in, "Training CSV")->required()->check(CLI::ExistingFile);
  f->add_option("--out", out, "Model JSON (- for stdout)");
  f->add_option("--degree", fo.degree, "Surface degree");
  f->add_option("--regression-degree", fo.regression_degree, "Regression degree");
  f->add_option("--order", fo.order, "Dynamical model order");

  auto* c = app.add_subcommand("classify", "Classify CSV rows with a fitted model");
  c->add_option("--model", model, "Model JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--in", in, "Input CSV")->required()->check(CLI::ExistingFile);
  c->add_option("--out", out, "Result JSON (- for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*r) return cmd_run(run);
    if (*s) {
      gateway::SessionService service(scenarios::PackageSet::load(manifest), data_dir);
      std::cerr << "ace: serving on " << host << ":" << port << '\n';
      gateway::serve(service, host, port);
      return kOk;
    }
    if (*f) return cmd_fit(kind, in, out, fo);
    if (*c) return cmd_classify(model, in, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kUsage;
  } catch (const gateway::AnswersExhausted& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kAnswers;
  } catch (const scenarios::SchemaError& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kSchema;
  } catch (const IoError& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kSchema;
  } catch (const ParseError& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kInference;
  } catch (const Error& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kInference;
  } catch (const std::exception& e) {
    std::cerr << "ace: " << e.what() << '\n';
    return kInference;
  }
  return kUsage;
}
