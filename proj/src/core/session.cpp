// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/session.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <shared_mutex>

#include "codehinter/error.hpp"
#include "codehinter/util.hpp"

namespace codehinter::session {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::pair<State, std::string_view> kStateNames[] = {
    {State::Created, "CREATED"},
    {State::SyntaxError, "SYNTAX_ERROR"},
    {State::TestsFailed, "TESTS_FAILED"},
    {State::TestsPassed, "TESTS_PASSED"},
    {State::SolutionRevealed, "SOLUTION_REVEALED"},
};

constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::RunE2e, "run_e2e"},
    {EventKind::Locate, "locate"},
    {EventKind::QuizIssued, "quiz_issued"},
    {EventKind::QuizAnswered, "quiz_answered"},
    {EventKind::PrintsSuggested, "prints_suggested"},
    {EventKind::PrintsRun, "prints_run"},
    {EventKind::PatchApplied, "patch_applied"},
    {EventKind::VisualizerOpened, "visualizer_opened"},
    {EventKind::Pseudocode, "pseudocode"},
    {EventKind::SolutionRevealed, "solution_revealed"},
    {EventKind::Chat, "chat"},
};

[[noreturn]] void illegal(const SessionState& s, EventKind kind, const std::string& why) {
  throw Error(ErrorCode::IllegalTransition,
              std::string(event_kind_name(kind)) + " is not allowed in state " + std::string(state_name(s.state)) +
                  (why.empty() ? "" : ": " + why),
              {{"state", state_name(s.state)}, {"event", event_kind_name(kind)}});
}

[[noreturn]] void corrupt(const std::string& message, json details = nullptr) {
  throw Error(ErrorCode::CorruptLog, message, std::move(details));
}

}  // namespace

std::string_view state_name(State state) {
  for (const auto& [s, name] : kStateNames) {
    if (s == state) return name;
  }
  return "CREATED";
}

std::optional<State> parse_state(std::string_view name) {
  for (const auto& [s, n] : kStateNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::string_view event_kind_name(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "chat";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_helper(EventKind kind) {
  switch (kind) {
    case EventKind::Locate:
    case EventKind::QuizIssued:
    case EventKind::PrintsSuggested:
    case EventKind::PrintsRun:
    case EventKind::VisualizerOpened:
    case EventKind::Pseudocode: return true;
    default: return false;
  }
}

json to_json(const Event& e) {
  return {{"seq", e.seq}, {"at", e.at}, {"kind", event_kind_name(e.kind)}, {"payload", e.payload}};
}

Event event_from_json(const json& j) {
  if (!j.is_object() || j.size() != 4 || !j.contains("seq") || !j.contains("at") || !j.contains("kind") ||
      !j.contains("payload")) {
    corrupt("an event must have exactly seq, at, kind and payload");
  }
  if (!j["seq"].is_number_integer()) corrupt("seq must be an integer");
  if (!j["at"].is_string() || !trace::is_rfc3339(j["at"].get<std::string>())) corrupt("at must be an RFC 3339 time");
  if (!j["kind"].is_string()) corrupt("kind must be a string");
  auto kind = parse_event_kind(j["kind"].get<std::string>());
  if (!kind) corrupt("unknown event kind '" + j["kind"].get<std::string>() + "'");
  return {j["seq"].get<long>(), j["at"].get<std::string>(), *kind, j["payload"]};
}

json to_json(const SessionState& s) {
  return {{"state", state_name(s.state)},
          {"report", s.report ? trace::to_json(*s.report) : json(nullptr)},
          {"spectrum", s.spectrum ? trace::spectrum_to_json(*s.spectrum) : json(nullptr)},
          {"snapshot_hash", s.snapshot_hash},
          {"expected_hash", s.expected_hash},
          {"quiz", s.quiz ? assist::to_json(*s.quiz, true) : json(nullptr)},
          {"quiz_answered", s.quiz_answered},
          {"plan", s.plan ? assist::to_json(*s.plan) : json(nullptr)},
          {"runs", s.runs},
          {"helper_uses", s.helper_uses},
          {"last_seq", s.last_seq}};
}

bool operator==(const SessionState& a, const SessionState& b) { return to_json(a) == to_json(b); }

bool table_allows(State state, EventKind kind) {
  switch (kind) {
    case EventKind::RunE2e:
    case EventKind::Chat: return true;
    case EventKind::Locate:
    case EventKind::PrintsSuggested:
    case EventKind::PrintsRun:
    case EventKind::VisualizerOpened:
    case EventKind::SolutionRevealed: return state == State::TestsFailed;
    case EventKind::QuizIssued:
    case EventKind::QuizAnswered:
    case EventKind::PatchApplied: return state == State::TestsFailed || state == State::SyntaxError;
    case EventKind::Pseudocode: return state == State::Created || state == State::TestsFailed;
  }
  return false;
}

void check_transition(const SessionState& s, EventKind kind) {
  if (!table_allows(s.state, kind)) illegal(s, kind, "");
  switch (kind) {
    case EventKind::QuizAnswered:
      if (!s.quiz) illegal(s, kind, "there is no active quiz card");
      if (s.quiz_answered) illegal(s, kind, "the active quiz card was already answered");
      break;
    case EventKind::PrintsRun:
      if (!s.plan) illegal(s, kind, "there is no active print plan");
      break;
    case EventKind::SolutionRevealed:
      if (s.runs < 1 || s.helper_uses < 1) {
        throw Error(ErrorCode::RevealGated,
                    "the solution is available after at least one test run and one helper",
                    {{"runs", s.runs}, {"helper_uses", s.helper_uses}});
      }
      break;
    default: break;
  }
}

SessionState apply(SessionState s, const Event& e) {
  check_transition(s, e.kind);
  const json& p = e.payload;
  try {
    switch (e.kind) {
      case EventKind::RunE2e: {
        s.report = trace::report_from_json(p.at("report"));
        s.spectrum = trace::spectrum_from_json(p.at("spectrum"));
        s.snapshot_hash = p.at("snapshot_hash").get<std::string>();
        s.expected_hash = s.snapshot_hash;
        s.state = s.report->syntax_branch()  ? State::SyntaxError
                  : s.report->all_passed() ? State::TestsPassed
                                           : State::TestsFailed;
        s.quiz.reset();
        s.quiz_answered = false;
        s.plan.reset();
        ++s.runs;
        break;
      }
      case EventKind::QuizIssued:
        s.quiz = assist::quiz_from_json(p);
        s.quiz_answered = false;
        break;
      case EventKind::QuizAnswered:
        if (p.at("card_id").get<std::string>() != s.quiz->id) illegal(s, e.kind, "the answer is for another card");
        s.quiz_answered = true;
        break;
      case EventKind::PrintsSuggested: s.plan = assist::print_plan_from_json(p); break;
      case EventKind::PrintsRun:
        if (p.at("plan_id").get<std::string>() != s.plan->id) illegal(s, e.kind, "the run is for another plan");
        break;
      case EventKind::PatchApplied:
        s.expected_hash = p.at("snapshot_hash").get<std::string>();
        s.quiz.reset();
        s.quiz_answered = false;
        s.plan.reset();
        break;
      case EventKind::SolutionRevealed: s.state = State::SolutionRevealed; break;
      default: break;
    }
  } catch (const json::exception& ex) {
    corrupt("malformed " + std::string(event_kind_name(e.kind)) + " payload: " + ex.what(), {{"seq", e.seq}});
  } catch (const Error& ex) {
    if (ex.code() != ErrorCode::ValidationError && ex.code() != ErrorCode::PreconditionViolated) throw;
    corrupt("malformed " + std::string(event_kind_name(e.kind)) + " payload: " + ex.what(), {{"seq", e.seq}});
  }
  if (is_helper(e.kind)) ++s.helper_uses;
  s.last_seq = e.seq;
  return s;
}

SessionState replay(const std::vector<Event>& log) {
  SessionState s;
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].seq != static_cast<long>(i) + 1) {
      corrupt("expected seq " + std::to_string(i + 1) + ", found " + std::to_string(log[i].seq),
              {{"index", i}, {"seq", log[i].seq}});
    }
    try {
      s = apply(std::move(s), log[i]);
    } catch (const Error& ex) {
      if (ex.code() == ErrorCode::CorruptLog) throw;
      corrupt("event " + std::to_string(log[i].seq) + " is not a legal transition: " + ex.what(),
              {{"seq", log[i].seq}});
    }
  }
  return s;
}

UsageReport usage_report(const std::vector<Event>& log) {
  UsageReport r;
  for (const auto& e : log) {
    ++r.counts[std::string(event_kind_name(e.kind))];
    if (e.kind == EventKind::QuizAnswered) {
      ++r.quiz_answered;
      if (e.payload.is_object() && e.payload.value("is_correct", false)) ++r.quiz_correct;
    }
    if (e.kind == EventKind::RunE2e && e.payload.is_object() && e.payload.value("external_edit", false)) {
      ++r.external_edits;
    }
  }
  r.distinct_features = static_cast<int>(r.counts.size());
  if (r.quiz_answered > 0) r.quiz_accuracy = static_cast<double>(r.quiz_correct) / r.quiz_answered;
  return r;
}

json to_json(const UsageReport& r) {
  return {{"counts", r.counts},
          {"distinct_features", r.distinct_features},
          {"quiz_answered", r.quiz_answered},
          {"quiz_correct", r.quiz_correct},
          {"quiz_accuracy", r.quiz_accuracy ? json(*r.quiz_accuracy) : json(nullptr)},
          {"external_edits", r.external_edits}};
}

// ---- store ----

namespace {

// Readers must never see half of an appended line.
std::shared_mutex& io_mutex() {
  static std::shared_mutex m;
  return m;
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

std::string new_id() {
  static std::mutex m;
  static std::mt19937_64 rng(std::random_device{}());
  std::lock_guard lock(m);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

SessionStore::SessionStore(fs::path data_dir) : dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create data directory " + dir_.string() + ": " + ec.message());
}

fs::path SessionStore::config_path(const std::string& id) const { return dir_ / (id + ".config.json"); }
fs::path SessionStore::log_path(const std::string& id) const { return dir_ / (id + ".events.jsonl"); }

std::string SessionStore::create(const runner::ProjectConfig& config) {
  runner::validate_config(config);
  std::string id;
  do {
    id = new_id();
  } while (fs::exists(config_path(id)));
  write_file_atomic(config_path(id), runner::to_json(config).dump(2) + "\n");
  write_file(log_path(id), "");
  return id;
}

bool SessionStore::exists(const std::string& id) const {
  return valid_id(id) && fs::exists(config_path(id)) && fs::exists(log_path(id));
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    std::string name = entry.path().filename().string();
    const std::string suffix = ".events.jsonl";
    if (name.size() > suffix.size() && name.ends_with(suffix)) {
      std::string id = name.substr(0, name.size() - suffix.size());
      if (exists(id)) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

runner::ProjectConfig SessionStore::config(const std::string& id) const {
  if (!exists(id)) throw Error(ErrorCode::SessionNotFound, "no session '" + id + "'", {{"session_id", id}});
  json j = json::parse(read_file(config_path(id)), nullptr, false);
  if (j.is_discarded()) corrupt("session config is not JSON", {{"session_id", id}});
  return runner::config_from_json(j, dir_);
}

std::vector<Event> SessionStore::events(const std::string& id) const {
  if (!exists(id)) throw Error(ErrorCode::SessionNotFound, "no session '" + id + "'", {{"session_id", id}});
  std::string bytes;
  {
    std::shared_lock lock(io_mutex());
    bytes = read_file(log_path(id));
  }
  std::vector<Event> out;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t nl = bytes.find('\n', start);
    if (nl == std::string::npos) corrupt("the last line of the log is incomplete", {{"session_id", id}});
    json j = json::parse(bytes.begin() + start, bytes.begin() + nl, nullptr, false);
    if (j.is_discarded()) corrupt("line " + std::to_string(out.size() + 1) + " is not JSON", {{"session_id", id}});
    out.push_back(event_from_json(j));
    if (out.back().seq != static_cast<long>(out.size())) {
      corrupt("expected seq " + std::to_string(out.size()) + ", found " + std::to_string(out.back().seq),
              {{"session_id", id}});
    }
    start = nl + 1;
  }
  return out;
}

SessionState SessionStore::state(const std::string& id) const { return replay(events(id)); }

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

SessionState SessionStore::append(const std::string& id, const SessionState& current, EventKind kind,
                                  json payload) {
  Event e{current.last_seq + 1, trace::utc_now_rfc3339(), kind, std::move(payload)};
  SessionState next = apply(current, e);
  std::string line = to_json(e).dump() + "\n";
  std::unique_lock lock(io_mutex());
  int fd = ::open(log_path(id).c_str(), O_WRONLY | O_APPEND | O_CLOEXEC);
  if (fd < 0) throw Error(ErrorCode::IoError, "cannot open event log: " + std::string(std::strerror(errno)));
  std::size_t done = 0;
  while (done < line.size()) {
    ssize_t n = ::write(fd, line.data() + done, line.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      int err = errno;
      ::close(fd);
      throw Error(ErrorCode::IoError, "cannot append to event log: " + std::string(std::strerror(err)));
    }
    done += static_cast<std::size_t>(n);
  }
  ::fdatasync(fd);
  ::close(fd);
  return next;
}

SessionState SessionStore::dispatch(const std::string& id, EventKind kind, json payload) {
  return transact(id, [&](const SessionState&) { return std::make_pair(kind, payload); });
}

SessionState SessionStore::transact(const std::string& id, const Work& work) {
  if (!exists(id)) throw Error(ErrorCode::SessionNotFound, "no session '" + id + "'", {{"session_id", id}});
  std::lock_guard lock(lock_for(id));
  SessionState current = state(id);
  auto [kind, payload] = work(current);
  return append(id, current, kind, std::move(payload));
}

}  // namespace codehinter::session
