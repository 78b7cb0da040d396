// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// codehinter: command-line front end. Exit status 0 on success, 1 on a
// domain error, 2 on a usage error.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "codehinter/assist.hpp"
#include "codehinter/corpus.hpp"
#include "codehinter/error.hpp"
#include "codehinter/host.hpp"
#include "codehinter/patch.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/spectrum.hpp"
#include "codehinter/trace.hpp"
#include "codehinter/util.hpp"
#include "codehinter/workbench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace codehinter;

namespace {

struct Globals {
  std::string project;
  std::string trace;
  std::string data_dir;
  std::string session;
  std::string formula = "ochiai";
  std::size_t top = spectrum::kDefaultTopK;
  std::vector<std::string> subjects;
  bool json_out = false;
};

std::string score_text(double score) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

runner::ProjectConfig project_config(const Globals& g) {
  if (g.project.empty()) throw Error(ErrorCode::PreconditionViolated, "--project is required");
  fs::path dir = g.project;
  if (fs::exists(dir / runner::kConfigFileName)) {
    auto config = runner::load_project_config(dir);
    if (!g.subjects.empty()) config.subject_files = g.subjects;
    runner::validate_config(config);
    return config;
  }
  runner::ProjectConfig config;
  config.root = fs::absolute(dir);
  config.subject_files = g.subjects;
  runner::validate_config(config);
  return config;
}

// A workbench session for the command: the named one, or a fresh one that
// lives in --data-dir (or a scratch directory) and starts with a test run.
class CommandSession {
 public:
  explicit CommandSession(const Globals& g) {
    fs::path dir = g.data_dir;
    if (dir.empty()) {
      scratch_.emplace("codehinter-cli");
      dir = scratch_->path();
    }
    bench_ = std::make_unique<Workbench>(dir, assist::provider_from_env());
    if (!g.session.empty()) {
      id_ = g.session;
      bench_->store().config(id_);  // SessionNotFound early
    } else {
      id_ = bench_->create_session(project_config(g));
      bench_->run_e2e(id_);
      if (!g.data_dir.empty()) std::cerr << "session " << id_ << "\n";
    }
  }

  Workbench& bench() { return *bench_; }
  const std::string& id() const { return id_; }

 private:
  std::optional<TempDir> scratch_;
  std::unique_ptr<Workbench> bench_;
  std::string id_;
};

void print_report(const json& report) {
  int failed = report["failed"].get<int>() + report["errored"].get<int>();
  std::cout << "passed=" << report["passed"].get<int>() << " failed=" << failed << "\n";
  if (!report["syntax_error"].is_null()) {
    const auto& se = report["syntax_error"];
    std::cout << "syntax error at " << se["file"].get<std::string>() << ":" << se["line"].get<int>() << ": "
              << se["message"].get<std::string>() << "\n";
  }
  for (const auto& f : report["failing"]) {
    std::string message = f["message"].is_string() ? f["message"].get<std::string>() : "";
    std::cout << f["outcome"].get<std::string>() << "\t" << f["test_id"].get<std::string>() << "\t"
              << message.substr(0, message.find('\n')) << "\n";
  }
}

int cmd_test(const Globals& g, const std::string& trace_out) {
  auto config = project_config(g);
  auto run = runner::run_end_to_end(config);
  if (!trace_out.empty()) {
    trace::TraceFile t;
    t.created_at = trace::utc_now_rfc3339();
    t.adapter = "codehinter";
    t.spectrum = run.spectrum;
    write_file_atomic(trace_out, trace::serialize_trace(t));
  }
  json report = trace::to_json(run.report);
  if (g.json_out) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_report(report);
  }
  return 0;
}

int cmd_locate(const Globals& g, bool explain) {
  auto formula = spectrum::parse_formula(g.formula);
  if (!g.trace.empty()) {
    auto t = trace::parse_trace(read_file(g.trace));
    auto ranking = spectrum::rank(t.spectrum, formula);
    if (g.json_out) {
      std::cout << spectrum::to_json(ranking).dump(2) << "\n";
      return 0;
    }
    for (const auto& r : spectrum::top_k(ranking, g.top)) {
      std::cout << r.location.file << "\t" << r.location.line << "\t" << score_text(r.score) << "\n";
    }
    return 0;
  }
  CommandSession s(g);
  json result = s.bench().locate(s.id(), formula, g.top);
  if (g.json_out) {
    std::cout << result.dump(2) << "\n";
    return 0;
  }
  for (const auto& l : result["locations"]) {
    std::cout << l["file"].get<std::string>() << "\t" << l["line"].get<int>() << "\t"
              << score_text(l["score"].get<double>());
    if (explain) std::cout << "\t" << l["explanation"].get<std::string>();
    std::cout << "\n";
  }
  return 0;
}

int cmd_quiz(const Globals& g, std::optional<int> answer) {
  CommandSession s(g);
  json card = s.bench().quiz(s.id());
  if (g.json_out && !answer) {
    std::cout << card.dump(2) << "\n";
    return 0;
  }
  std::cout << card["question"].get<std::string>() << "\n";
  int i = 0;
  for (const auto& o : card["options"]) {
    std::cout << "\n[" << i++ << "] " << o["proposal"]["rationale"].get<std::string>() << "\n"
              << o["diff"].get<std::string>();
  }
  if (answer) {
    json verdict = s.bench().answer(s.id(), *answer);
    std::cout << "\n" << (verdict["is_correct"].get<bool>() ? "correct" : "incorrect") << ": "
              << verdict["explanation"].get<std::string>() << "\n";
  }
  return 0;
}

int cmd_prints(const Globals& g, bool run) {
  CommandSession s(g);
  json plan = s.bench().prints(s.id());
  json out = {{"plan", plan}};
  if (run) out["output"] = s.bench().run_prints(s.id());
  if (g.json_out) {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& ins : plan["insertions"]) {
    std::cout << ins["file"].get<std::string>() << ":" << ins["after_line"].get<int>() << "\t"
              << ins["tag"].get<std::string>() << " " << ins["variable"].get<std::string>() << "\t"
              << ins["reason"].get<std::string>() << "\n";
  }
  if (run) {
    for (const auto& l : out["output"]["lines"]) {
      std::cout << l["test_id"].get<std::string>() << "\t" << l["text"].get<std::string>() << "\n";
    }
  }
  return 0;
}

int cmd_diff(const Globals& g, const std::string& proposal_file, bool apply) {
  auto config = project_config(g);
  json j = json::parse(read_file(proposal_file), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::PreconditionViolated, proposal_file + " is not JSON");
  patch::PatchProposal proposal;
  try {
    proposal = patch::proposal_from_json(j.contains("proposal") ? j["proposal"] : j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::PreconditionViolated, std::string("malformed proposal: ") + e.what());
  }
  if (apply) {
    std::cout << patch::apply_patch_to_project(config, proposal).diff;
  } else {
    std::cout << patch::apply_patch(runner::snapshot_source(config), proposal).diff;
  }
  return 0;
}

host::Server* g_server = nullptr;

int cmd_serve(const Globals& g, host::ServerOptions options) {
  fs::path dir = g.data_dir.empty() ? fs::path("codehinter-data") : fs::path(g.data_dir);
  Workbench bench(dir, assist::provider_from_env());
  host::Server server(bench, options);
  int port = server.bind();
  std::cerr << "codehinter " << kVersion << " listening on http://" << options.bind << ":" << port
            << " (data in " << dir.string() << ", provider " << bench.provider().name() << ")\n";
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.serve();
  g_server = nullptr;
  return 0;
}

int cmd_report(const Globals& g, bool events) {
  if (g.data_dir.empty() || g.session.empty()) {
    throw Error(ErrorCode::PreconditionViolated, "report needs --data-dir and --session");
  }
  Workbench bench(g.data_dir, std::make_shared<assist::StubProvider>());
  json out = events ? bench.events(g.session) : bench.usage(g.session);
  if (!g.json_out && !events) {
    for (const auto& [kind, count] : out["counts"].items()) std::cout << kind << "\t" << count.get<int>() << "\n";
    std::cout << "distinct_features\t" << out["distinct_features"].get<int>() << "\n";
    std::cout << "quiz_accuracy\t"
              << (out["quiz_accuracy"].is_null() ? std::string("n/a") : score_text(out["quiz_accuracy"].get<double>()))
              << "\n";
    return 0;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_corpus(const Globals& g, const std::string& dir) {
  auto formula = spectrum::parse_formula(g.formula);
  auto exercises = corpus::load_corpus(dir, corpus::Verify::Full);
  for (const auto& ex : exercises) {
    for (const auto& v : ex.variants) {
      TempDir tmp("codehinter-corpus");
      auto run = runner::run_end_to_end(corpus::materialize(ex, v.name, tmp.path()));
      std::cout << ex.id << "/" << v.name << "\t";
      if (run.spectrum.syntax_error) {
        std::cout << "syntax\t" << run.spectrum.syntax_error->line << "\n";
        continue;
      }
      auto ranking = spectrum::rank(run.spectrum, formula);
      std::string ranks;
      for (const auto& known : v.known_lines) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
          if (ranking.entries[i].location == known) pos = i + 1;
        }
        ranks += (ranks.empty() ? "" : ",") + std::to_string(pos);
      }
      auto clean = corpus::clean_signal_line(run.spectrum);
      std::cout << "rank\t" << ranks << "\t" << (clean ? "clean:" + std::to_string(clean->line) : "noisy") << "\n";
    }
  }
  std::cout << exercises.size() << " exercises verified\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"codehinter: debugging assistant for Python exercises"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--project", g.project, "Project directory (holds codehinter.json)");
  app.add_option("--trace", g.trace, "Trace file to read");
  app.add_option("--data-dir", g.data_dir, "Session data directory");
  app.add_option("--session", g.session, "Existing session id");
  app.add_option("--formula", g.formula, "Suspiciousness formula")
      ->check(CLI::IsMember({"tarantula", "ochiai", "dstar2", "op2"}));
  app.add_option("--top", g.top, "Number of locations")->check(CLI::PositiveNumber);
  app.add_option("--subject", g.subjects, "Subject file (overrides the config)");
  app.add_flag("--json", g.json_out, "Print JSON");

  std::string trace_out;
  auto* test = app.add_subcommand("test", "Run the End-to-End Test");
  test->add_option("--trace-out", trace_out, "Also write the trace here");

  bool explain = false;
  auto* locate = app.add_subcommand("locate", "Rank suspicious lines");
  locate->add_flag("--explain", explain, "Add an explanation column");

  std::optional<int> answer;
  auto* quiz = app.add_subcommand("quiz", "Issue a validated fix quiz");
  quiz->add_option("--answer", answer, "Answer with this option index");

  bool run_prints = false;
  auto* prints = app.add_subcommand("prints", "Suggest print statements");
  prints->add_flag("--run", run_prints, "Run the tests with the prints in a shadow copy");

  std::string proposal_file;
  bool apply = false;
  auto* diff = app.add_subcommand("diff", "Show or apply a patch proposal");
  diff->add_option("--proposal", proposal_file, "Proposal JSON file")->required();
  diff->add_flag("--apply", apply, "Write the change to the project");

  host::ServerOptions server_options;
  std::string ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--bind", server_options.bind, "Address to bind");
  serve->add_option("--port", server_options.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve->add_option("--ui", ui_dir, "Static files served under /ui")->check(CLI::ExistingDirectory);

  bool events = false;
  auto* report = app.add_subcommand("report", "Usage report for a session");
  report->add_flag("--events", events, "Print the raw event log instead");

  std::string corpus_dir = "exercises";
  auto* corpus_cmd = app.add_subcommand("corpus", "Verify the exercise corpus and show bug ranks");
  corpus_cmd->add_option("--dir", corpus_dir, "Corpus directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*test) return cmd_test(g, trace_out);
    if (*locate) return cmd_locate(g, explain);
    if (*quiz) return cmd_quiz(g, answer);
    if (*prints) return cmd_prints(g, run_prints);
    if (*diff) return cmd_diff(g, proposal_file, apply);
    if (*serve) {
      if (!ui_dir.empty()) server_options.ui_dir = ui_dir;
      return cmd_serve(g, server_options);
    }
    if (*report) return cmd_report(g, events);
    if (*corpus_cmd) return cmd_corpus(g, corpus_dir);
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    if (!e.details().is_null()) std::cerr << "details: " << e.details().dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
