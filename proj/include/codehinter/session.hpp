// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Debugging sessions as event-sourced state machines. The state is a pure
// fold over the event log; the log is an append-only JSON-lines file per
// session, one {seq, at, kind, payload} object per line.

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/assist.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/trace.hpp"

namespace codehinter::session {

enum class State { Created, SyntaxError, TestsFailed, TestsPassed, SolutionRevealed };

inline constexpr State kAllStates[] = {State::Created, State::SyntaxError, State::TestsFailed, State::TestsPassed,
                                       State::SolutionRevealed};

std::string_view state_name(State state);
std::optional<State> parse_state(std::string_view name);

enum class EventKind {
  RunE2e,
  Locate,
  QuizIssued,
  QuizAnswered,
  PrintsSuggested,
  PrintsRun,
  PatchApplied,
  VisualizerOpened,
  Pseudocode,
  SolutionRevealed,
  Chat,
};

inline constexpr EventKind kAllEventKinds[] = {
    EventKind::RunE2e,          EventKind::Locate,         EventKind::QuizIssued,   EventKind::QuizAnswered,
    EventKind::PrintsSuggested, EventKind::PrintsRun,      EventKind::PatchApplied, EventKind::VisualizerOpened,
    EventKind::Pseudocode,      EventKind::SolutionRevealed, EventKind::Chat};

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

/// Helper invocations count towards the solution-reveal gate.
bool is_helper(EventKind kind);

struct Event {
  long seq = 0;
  std::string at;
  EventKind kind = EventKind::Chat;
  nlohmann::json payload;
};

nlohmann::json to_json(const Event& event);
/// Throws CorruptLog.
Event event_from_json(const nlohmann::json& j);

// Payloads, by kind:
//   run_e2e           {report, spectrum, snapshot_hash, external_edit}
//   locate            LocateResult
//   quiz_issued       QuizCard with answers
//   quiz_answered     {card_id, choice, is_correct}
//   prints_suggested  PrintPlan
//   prints_run        {plan_id, output}
//   patch_applied     {proposal, diff, snapshot_hash}  (hash after the patch)
//   visualizer_opened {file, url}
//   pseudocode        {steps, fallback}
//   solution_revealed {proposal}
//   chat              {text, reply}

struct SessionState {
  State state = State::Created;
  std::optional<trace::TestReport> report;
  std::optional<CoverageSpectrum> spectrum;
  std::string snapshot_hash;   // source the last run saw
  std::string expected_hash;   // source the session expects on disk
  std::optional<assist::QuizCard> quiz;
  bool quiz_answered = false;
  std::optional<assist::PrintPlan> plan;
  int runs = 0;
  int helper_uses = 0;
  long last_seq = 0;
};

/// Canonical JSON form; two states are equal iff their JSON is equal.
nlohmann::json to_json(const SessionState& state);
bool operator==(const SessionState& a, const SessionState& b);

/// Throws IllegalTransition or RevealGated when `kind` may not follow `state`.
void check_transition(const SessionState& state, EventKind kind);

/// Whether the table admits `kind` in `state`, ignoring the payload-level
/// guards (active card, active plan, reveal gate).
bool table_allows(State state, EventKind kind);

/// One step of the fold. Throws like check_transition, plus CorruptLog on a
/// malformed payload.
SessionState apply(SessionState state, const Event& event);

/// Throws CorruptLog (gaps, duplicates, malformed lines, illegal sequences).
SessionState replay(const std::vector<Event>& log);

struct UsageReport {
  std::map<std::string, int> counts;  // by event kind, zero counts omitted
  int distinct_features = 0;
  int quiz_answered = 0;
  int quiz_correct = 0;
  std::optional<double> quiz_accuracy;  // empty when nothing was answered
  int external_edits = 0;
};

UsageReport usage_report(const std::vector<Event>& log);
nlohmann::json to_json(const UsageReport& report);

/// Sessions under a data directory: <id>.config.json and <id>.events.jsonl.
/// Mutations on one session are serialized; sessions are independent.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path data_dir);

  const std::filesystem::path& data_dir() const { return dir_; }

  /// Throws ConfigInvalid.
  std::string create(const runner::ProjectConfig& config);
  bool exists(const std::string& id) const;
  std::vector<std::string> list() const;

  /// Throws SessionNotFound.
  runner::ProjectConfig config(const std::string& id) const;
  /// Throws SessionNotFound, CorruptLog.
  std::vector<Event> events(const std::string& id) const;
  SessionState state(const std::string& id) const;

  /// Appends one event after checking it against the current state.
  SessionState dispatch(const std::string& id, EventKind kind, nlohmann::json payload);

  /// Runs `work` under the session's lock and appends the event it returns.
  /// `work` sees the state at the time the lock was taken, so a slow run is
  /// never interleaved with another mutation of the same session.
  using Work = std::function<std::pair<EventKind, nlohmann::json>(const SessionState&)>;
  SessionState transact(const std::string& id, const Work& work);

 private:
  std::filesystem::path config_path(const std::string& id) const;
  std::filesystem::path log_path(const std::string& id) const;
  std::mutex& lock_for(const std::string& id);
  SessionState append(const std::string& id, const SessionState& current, EventKind kind, nlohmann::json payload);

  std::filesystem::path dir_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace codehinter::session
