// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "session_fixtures.hpp"

#include <stdexcept>

#include "support.hpp"

namespace codehinter::testing {

using nlohmann::json;
using session::EventKind;
using session::State;

bool documented_transition(State s, EventKind k) {
  const bool failed = s == State::TestsFailed;
  const bool syntax = s == State::SyntaxError;
  switch (k) {
    case EventKind::RunE2e:
    case EventKind::Chat: return true;
    case EventKind::Locate:
    case EventKind::PrintsSuggested:
    case EventKind::PrintsRun:
    case EventKind::VisualizerOpened:
    case EventKind::SolutionRevealed: return failed;
    case EventKind::QuizIssued:
    case EventKind::QuizAnswered:
    case EventKind::PatchApplied: return failed || syntax;
    case EventKind::Pseudocode: return failed || s == State::Created;
  }
  return false;
}

namespace {

CoverageSpectrum failing_spectrum() {
  CoverageSpectrum s;
  s.subject_files = {"a.py"};
  s.records = {record("t1", Outcome::Fail, {{"a.py", 1}}), record("t2", Outcome::Pass, {{"a.py", 2}})};
  return s;
}

json run_payload(const CoverageSpectrum& s, const std::string& hash) {
  return {{"report", trace::to_json(trace::summarize(s))},
          {"spectrum", trace::spectrum_to_json(s)},
          {"snapshot_hash", hash},
          {"external_edit", false}};
}

}  // namespace

json failing_run_payload() { return run_payload(failing_spectrum(), "h-fail"); }

json passing_run_payload() {
  auto s = failing_spectrum();
  s.records[0].outcome = Outcome::Pass;
  s.records[0].message.reset();
  return run_payload(s, "h-pass");
}

json syntax_run_payload() {
  CoverageSpectrum s;
  s.subject_files = {"a.py"};
  s.syntax_error = SyntaxErrorInfo{"a.py", 1, "invalid syntax"};
  return run_payload(s, "h-syntax");
}

assist::QuizCard synthetic_card(const std::string& id) {
  assist::QuizCard card;
  card.id = id;
  card.question = "Which change fixes the failing test?";
  card.snapshot_hash = "h-fail";
  for (int i = 0; i < 3; ++i) {
    assist::QuizOption o;
    o.proposal = patch::make_proposal({{"a.py", 1, {"x = 1"}, {"x = " + std::to_string(i + 2)}}}, "try",
                                      patch::Origin::Mutation);
    o.explanation = i == 0 ? "Correct. It works." : "Not this one. It fails.";
    o.validation.applied = true;
    o.validation.outcome = i == 0 ? assist::ValidationOutcome::AllPass : assist::ValidationOutcome::StillFailing;
    if (i != 0) o.validation.failing_after = {"t1"};
    card.options.push_back(o);
  }
  return card;
}

assist::PrintPlan synthetic_plan() {
  auto snap = runner::make_snapshot({{"a.py", "x = 1\ny = x\n"}});
  return assist::build_print_plan(snap, {{"a.py", 1, "x", "watch x"}});
}

json payload_for(EventKind k, const session::SessionState& s) {
  switch (k) {
    case EventKind::RunE2e: return failing_run_payload();
    case EventKind::Locate: return {{"formula", "ochiai"}, {"locations", json::array()}, {"fallback", false}};
    case EventKind::QuizIssued: return assist::to_json(synthetic_card("card-new"), true);
    case EventKind::QuizAnswered:
      return {{"card_id", s.quiz ? s.quiz->id : "none"}, {"choice", 0}, {"is_correct", true}};
    case EventKind::PrintsSuggested: return assist::to_json(synthetic_plan());
    case EventKind::PrintsRun: return {{"plan_id", s.plan ? s.plan->id : "none"}, {"output", json::object()}};
    case EventKind::PatchApplied: return {{"proposal", json::object()}, {"diff", ""}, {"snapshot_hash", "h-patched"}};
    case EventKind::VisualizerOpened: return {{"file", "a.py"}, {"url", "https://example"}};
    case EventKind::Pseudocode: return {{"steps", {"Do it."}}, {"fallback", true}};
    case EventKind::SolutionRevealed: return {{"proposal", json::object()}};
    case EventKind::Chat: return {{"text", "hi"}, {"reply", "hello"}};
  }
  return json::object();
}

runner::ProjectConfig SyntheticStore::config() {
  return write_project(project.path(), {{"a.py", "x = 1\n"}}, {"a.py"});
}

std::string SyntheticStore::session_in(State target) {
  std::string id = store.create(config());
  switch (target) {
    case State::Created: break;
    case State::SyntaxError:
      store.dispatch(id, EventKind::RunE2e, syntax_run_payload());
      store.dispatch(id, EventKind::QuizIssued, assist::to_json(synthetic_card("card-s"), true));
      break;
    case State::TestsFailed:
    case State::SolutionRevealed:
      store.dispatch(id, EventKind::RunE2e, failing_run_payload());
      store.dispatch(id, EventKind::QuizIssued, assist::to_json(synthetic_card("card-f"), true));
      store.dispatch(id, EventKind::PrintsSuggested, assist::to_json(synthetic_plan()));
      if (target == State::SolutionRevealed) {
        store.dispatch(id, EventKind::SolutionRevealed, {{"proposal", json::object()}});
      }
      break;
    case State::TestsPassed: store.dispatch(id, EventKind::RunE2e, passing_run_payload()); break;
  }
  if (store.state(id).state != target) throw std::logic_error("fixture did not reach the target state");
  return id;
}

}  // namespace codehinter::testing
