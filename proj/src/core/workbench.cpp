// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/workbench.hpp"

#include "codehinter/assist.hpp"
#include "codehinter/error.hpp"
#include "codehinter/patch.hpp"

namespace codehinter {

using nlohmann::json;
using session::EventKind;
using session::SessionState;

namespace {

// The project must still be what the last run saw.
runner::SourceSnapshot current_snapshot(const runner::ProjectConfig& config, const SessionState& s) {
  auto snapshot = runner::snapshot_source(config);
  if (!s.snapshot_hash.empty() && snapshot.hash() != s.snapshot_hash) {
    throw Error(ErrorCode::SnapshotDrift, "the source changed since the last test run; run the tests again",
                {{"expected", s.snapshot_hash}, {"actual", snapshot.hash()}});
  }
  return snapshot;
}

std::string statement_of(const runner::ProjectConfig& config) {
  return config.exercise ? config.exercise->statement : "";
}

const runner::ExerciseSpec& exercise_of(const runner::ProjectConfig& config) {
  if (!config.exercise) throw Error(ErrorCode::PreconditionViolated, "the project has no exercise description");
  return *config.exercise;
}

}  // namespace

Workbench::Workbench(std::filesystem::path data_dir, std::shared_ptr<assist::SuggestionProvider> provider)
    : store_(std::move(data_dir)), provider_(std::move(provider)) {}

std::string Workbench::create_session(const runner::ProjectConfig& config) { return store_.create(config); }

json Workbench::view(const std::string& id) const {
  SessionState s = store_.state(id);
  return {{"session_id", id},
          {"state", session::state_name(s.state)},
          {"report", s.report ? trace::to_json(*s.report) : json(nullptr)},
          {"snapshot_hash", s.snapshot_hash},
          {"runs", s.runs},
          {"helper_uses", s.helper_uses},
          {"quiz", s.quiz ? assist::to_json(*s.quiz, false) : json(nullptr)},
          {"quiz_answered", s.quiz_answered},
          {"plan", s.plan ? assist::to_json(*s.plan) : json(nullptr)},
          {"last_seq", s.last_seq}};
}

json Workbench::run_e2e(const std::string& id) {
  auto config = store_.config(id);
  json result;
  auto next = store_.transact(id, [&](const SessionState& s) {
    auto run = runner::run_end_to_end(config);
    std::string hash = run.snapshot.hash();
    bool external = s.runs > 0 && hash != s.expected_hash;
    json payload = {{"report", trace::to_json(run.report)},
                    {"spectrum", trace::spectrum_to_json(run.spectrum)},
                    {"snapshot_hash", hash},
                    {"external_edit", external}};
    result = {{"report", payload["report"]}, {"snapshot_hash", hash}, {"external_edit", external}};
    return std::make_pair(EventKind::RunE2e, std::move(payload));
  });
  result["state"] = session::state_name(next.state);
  return result;
}

json Workbench::locate(const std::string& id, spectrum::Formula formula, std::size_t top) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::Locate);
    auto snapshot = current_snapshot(config, s);
    result = assist::to_json(
        assist::locate_and_explain(*s.spectrum, snapshot, *provider_, statement_of(config), formula, top));
    return std::make_pair(EventKind::Locate, result);
  });
  return result;
}

json Workbench::quiz(const std::string& id) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::QuizIssued);
    auto snapshot = current_snapshot(config, s);
    auto card = assist::make_quiz(config, *s.spectrum, snapshot, *provider_);
    result = assist::to_json(card, false);
    return std::make_pair(EventKind::QuizIssued, assist::to_json(card, true));
  });
  return result;
}

json Workbench::answer(const std::string& id, int choice) {
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::QuizAnswered);
    auto verdict = assist::answer_quiz(*s.quiz, choice);
    result = {{"is_correct", verdict.is_correct}, {"explanation", verdict.explanation}};
    return std::make_pair(EventKind::QuizAnswered,
                          json{{"card_id", s.quiz->id}, {"choice", choice}, {"is_correct", verdict.is_correct}});
  });
  return result;
}

json Workbench::prints(const std::string& id) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::PrintsSuggested);
    auto snapshot = current_snapshot(config, s);
    result = assist::to_json(assist::suggest_prints(*s.spectrum, snapshot, *provider_));
    return std::make_pair(EventKind::PrintsSuggested, result);
  });
  return result;
}

json Workbench::run_prints(const std::string& id) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::PrintsRun);
    result = assist::to_json(assist::run_instrumented(*s.plan, config));
    return std::make_pair(EventKind::PrintsRun, json{{"plan_id", s.plan->id}, {"output", result}});
  });
  return result;
}

json Workbench::apply_patch(const std::string& id, const json& body) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::PatchApplied);
    patch::PatchProposal proposal;
    if (body.is_object() && body.contains("proposal_id")) {
      if (!body["proposal_id"].is_string()) {
        throw Error(ErrorCode::PreconditionViolated, "proposal_id must be a string");
      }
      std::string pid = body["proposal_id"].get<std::string>();
      bool found = false;
      if (s.quiz) {
        for (const auto& o : s.quiz->options) {
          if (o.proposal.id == pid) {
            proposal = o.proposal;
            found = true;
          }
        }
      }
      if (!found) throw Error(ErrorCode::UnknownProposal, "no active proposal '" + pid + "'", {{"proposal_id", pid}});
    } else if (body.is_object() && body.contains("proposal")) {
      try {
        proposal = patch::proposal_from_json(body["proposal"]);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::PreconditionViolated, std::string("malformed proposal: ") + e.what());
      }
    } else {
      throw Error(ErrorCode::PreconditionViolated, "the body needs proposal_id or proposal");
    }
    auto applied = patch::apply_patch_to_project(config, proposal);
    std::string hash = applied.snapshot.hash();
    result = {{"proposal_id", proposal.id}, {"diff", applied.diff}, {"snapshot_hash", hash}};
    return std::make_pair(EventKind::PatchApplied,
                          json{{"proposal", patch::to_json(proposal)}, {"diff", applied.diff}, {"snapshot_hash", hash}});
  });
  return result;
}

json Workbench::solution(const std::string& id) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    session::check_transition(s, EventKind::SolutionRevealed);
    auto snapshot = runner::snapshot_source(config);
    auto proposal = assist::reveal_solution(exercise_of(config), snapshot);
    result = patch::to_json(proposal);
    result["diff"] = patch::apply_patch(snapshot, proposal).diff;
    return std::make_pair(EventKind::SolutionRevealed, json{{"proposal", patch::to_json(proposal)}});
  });
  return result;
}

json Workbench::pseudocode(const std::string& id, bool record) {
  auto config = store_.config(id);
  auto compute = [&](const SessionState& s) {
    session::check_transition(s, EventKind::Pseudocode);
    auto p = assist::pseudocode(exercise_of(config), *provider_);
    return json{{"steps", p.steps}, {"text", p.text()}, {"fallback", p.fallback}};
  };
  if (!record) return compute(store_.state(id));
  json result;
  store_.transact(id, [&](const SessionState& s) {
    result = compute(s);
    return std::make_pair(EventKind::Pseudocode, json{{"steps", result["steps"]}, {"fallback", result["fallback"]}});
  });
  return result;
}

json Workbench::visualizer(const std::string& id, const std::optional<std::string>& file, bool record) {
  auto config = store_.config(id);
  auto compute = [&](const SessionState& s) {
    session::check_transition(s, EventKind::VisualizerOpened);
    auto snapshot = current_snapshot(config, s);
    std::string entry = file.value_or(config.subject_files.front());
    return json{{"file", entry}, {"url", assist::visualizer_url(snapshot, entry)}};
  };
  if (!record) return compute(store_.state(id));
  json result;
  store_.transact(id, [&](const SessionState& s) {
    result = compute(s);
    return std::make_pair(EventKind::VisualizerOpened, result);
  });
  return result;
}

json Workbench::chat(const std::string& id, const std::string& text) {
  auto config = store_.config(id);
  json result;
  store_.transact(id, [&](const SessionState& s) {
    assist::ProviderContext ctx;
    if (s.spectrum) {
      try {
        ctx = assist::build_context(*s.spectrum, runner::snapshot_source(config), statement_of(config));
      } catch (const Error&) {
        ctx = {};  // chat works without code context
      }
    }
    ctx.statement = statement_of(config);
    std::string reply;
    std::string source = provider_->name();
    try {
      reply = provider_->chat(text, ctx);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ProviderUnavailable) throw;
      reply = assist::StubProvider().chat(text, ctx);
      source = "stub";
    }
    result = {{"reply", reply}, {"provider", source}};
    return std::make_pair(EventKind::Chat, json{{"text", text}, {"reply", reply}});
  });
  return result;
}

json Workbench::events(const std::string& id) const {
  json out = json::array();
  for (const auto& e : store_.events(id)) out.push_back(session::to_json(e));
  return out;
}

json Workbench::usage(const std::string& id) const { return session::to_json(session::usage_report(store_.events(id))); }

}  // namespace codehinter
