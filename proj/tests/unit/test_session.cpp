// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <set>
#include <thread>

#include <doctest.h>

#include "codehinter/error.hpp"
#include "codehinter/session.hpp"
#include "codehinter/util.hpp"
#include "session_fixtures.hpp"
#include "support.hpp"

using namespace codehinter;
using namespace codehinter::session;
using namespace codehinter::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("session") {
  TEST_CASE("names round-trip") {
    for (State s : kAllStates) CHECK(parse_state(state_name(s)) == s);
    for (EventKind k : kAllEventKinds) CHECK(parse_event_kind(event_kind_name(k)) == k);
    CHECK(state_name(State::TestsFailed) == "TESTS_FAILED");
    CHECK(event_kind_name(EventKind::RunE2e) == "run_e2e");
    CHECK_FALSE(parse_event_kind("delete").has_value());
  }

  TEST_CASE("create: CREATED with an empty log, distinct ids") {
    SyntheticStore s;
    std::string a = s.store.create(s.config());
    std::string b = s.store.create(s.config());
    CHECK(a != b);
    CHECK(a.size() == 16);
    CHECK(s.store.state(a).state == State::Created);
    CHECK(s.store.events(a).empty());
    CHECK(fs::exists(s.data.path() / (a + ".events.jsonl")));
    CHECK(fs::exists(s.data.path() / (a + ".config.json")));
    auto ids = s.store.list();
    CHECK(std::set<std::string>(ids.begin(), ids.end()) == std::set<std::string>{a, b});
    CHECK(s.store.config(a) == s.config());

    auto bad = s.config();
    bad.root = s.project.path() / "missing";
    CHECK(code_of([&] { s.store.create(bad); }) == ErrorCode::ConfigInvalid);
    CHECK(code_of([&] { s.store.state("0123456789abcdef"); }) == ErrorCode::SessionNotFound);
    CHECK(code_of([&] { s.store.state("../etc"); }) == ErrorCode::SessionNotFound);
  }

  TEST_CASE("exhaustive state x event legality") {
    SyntheticStore s;
    for (State state : kAllStates) {
      for (EventKind kind : kAllEventKinds) {
        CAPTURE(state_name(state));
        CAPTURE(event_kind_name(kind));
        CHECK(table_allows(state, kind) == documented_transition(state, kind));
        std::string id = s.session_in(state);
        SessionState before = s.store.state(id);
        std::size_t log_size = s.store.events(id).size();
        if (documented_transition(state, kind)) {
          SessionState after = s.store.dispatch(id, kind, payload_for(kind, before));
          CHECK(s.store.events(id).size() == log_size + 1);
          State expected = kind == EventKind::RunE2e             ? State::TestsFailed
                           : kind == EventKind::SolutionRevealed ? State::SolutionRevealed
                                                                 : state;
          CHECK(after.state == expected);
          CHECK(after.last_seq == static_cast<long>(log_size) + 1);
          CHECK(replay(s.store.events(id)) == after);
        } else {
          CHECK(code_of([&] { s.store.dispatch(id, kind, payload_for(kind, before)); }) == ErrorCode::IllegalTransition);
          CHECK(s.store.events(id).size() == log_size);
          CHECK(s.store.state(id) == before);
        }
      }
    }
  }

  TEST_CASE("illegal transitions name the state and the event") {
    SyntheticStore s;
    std::string id = s.session_in(State::TestsPassed);
    try {
      s.store.dispatch(id, EventKind::QuizIssued, payload_for(EventKind::QuizIssued, {}));
      FAIL("expected IllegalTransition");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IllegalTransition);
      CHECK(e.details()["state"] == "TESTS_PASSED");
      CHECK(e.details()["event"] == "quiz_issued");
    }
  }

  TEST_CASE("guards: active card, active plan, reveal gate") {
    SyntheticStore s;
    std::string id = s.store.create(s.config());
    s.store.dispatch(id, EventKind::RunE2e, failing_run_payload());
    auto st = s.store.state(id);
    CHECK(code_of([&] { s.store.dispatch(id, EventKind::QuizAnswered, payload_for(EventKind::QuizAnswered, st)); }) ==
          ErrorCode::IllegalTransition);
    CHECK(code_of([&] { s.store.dispatch(id, EventKind::PrintsRun, payload_for(EventKind::PrintsRun, st)); }) ==
          ErrorCode::IllegalTransition);
    CHECK(code_of([&] { s.store.dispatch(id, EventKind::SolutionRevealed, {{"proposal", json::object()}}); }) ==
          ErrorCode::RevealGated);

    s.store.dispatch(id, EventKind::QuizIssued, assist::to_json(synthetic_card("c1"), true));
    st = s.store.dispatch(id, EventKind::QuizAnswered, {{"card_id", "c1"}, {"choice", 0}, {"is_correct", true}});
    CHECK(st.quiz_answered);
    CHECK(code_of([&] { s.store.dispatch(id, EventKind::QuizAnswered, {{"card_id", "c1"}, {"choice", 1}, {"is_correct", false}}); }) ==
          ErrorCode::IllegalTransition);

    s.store.dispatch(id, EventKind::PrintsSuggested, assist::to_json(synthetic_plan()));
    st = s.store.dispatch(id, EventKind::PatchApplied, payload_for(EventKind::PatchApplied, st));
    CHECK_FALSE(st.quiz.has_value());
    CHECK_FALSE(st.plan.has_value());
    CHECK(st.expected_hash == "h-patched");

    st = s.store.dispatch(id, EventKind::SolutionRevealed, {{"proposal", json::object()}});
    CHECK(st.state == State::SolutionRevealed);
    CHECK(s.store.dispatch(id, EventKind::RunE2e, passing_run_payload()).state == State::TestsPassed);
  }

  TEST_CASE("chat is not a helper for the reveal gate") {
    SyntheticStore s;
    std::string id = s.store.create(s.config());
    s.store.dispatch(id, EventKind::RunE2e, failing_run_payload());
    s.store.dispatch(id, EventKind::Chat, payload_for(EventKind::Chat, {}));
    CHECK(code_of([&] { s.store.dispatch(id, EventKind::SolutionRevealed, {{"proposal", json::object()}}); }) ==
          ErrorCode::RevealGated);
    s.store.dispatch(id, EventKind::Locate, payload_for(EventKind::Locate, {}));
    CHECK(s.store.dispatch(id, EventKind::SolutionRevealed, {{"proposal", json::object()}}).state ==
          State::SolutionRevealed);
  }

  TEST_CASE("replay") {
    CHECK(replay({}) == SessionState{});
    CHECK(replay({}).state == State::Created);

    SyntheticStore s;
    std::string id = s.session_in(State::TestsFailed);
    auto log = s.store.events(id);
    CHECK(replay(log) == s.store.state(id));

    auto gap = log;
    gap.erase(gap.begin() + 1);
    CHECK(code_of([&] { replay(gap); }) == ErrorCode::CorruptLog);
    auto dup = log;
    dup.push_back(dup.back());
    CHECK(code_of([&] { replay(dup); }) == ErrorCode::CorruptLog);
    auto illegal = log;
    illegal[0].kind = EventKind::Locate;
    CHECK(code_of([&] { replay(illegal); }) == ErrorCode::CorruptLog);
    auto bad_payload = log;
    bad_payload[0].payload = {{"report", 3}};
    CHECK(code_of([&] { replay(bad_payload); }) == ErrorCode::CorruptLog);
  }

  TEST_CASE("log lines have exactly seq, at, kind and payload") {
    SyntheticStore s;
    std::string id = s.session_in(State::TestsFailed);
    std::ifstream in(s.data.path() / (id + ".events.jsonl"));
    std::string line;
    long seq = 0;
    while (std::getline(in, line)) {
      json j = json::parse(line);
      CHECK(j.size() == 4);
      CHECK(j["seq"] == ++seq);
      CHECK(trace::is_rfc3339(j["at"].get<std::string>()));
      CHECK(parse_event_kind(j["kind"].get<std::string>()).has_value());
      CHECK(j.contains("payload"));
    }
    CHECK(seq == 3);
    CHECK(code_of([] { event_from_json({{"seq", 1}, {"at", "2026-01-01T00:00:00Z"}, {"kind", "chat"}}); }) ==
          ErrorCode::CorruptLog);
    CHECK(code_of([] {
            event_from_json({{"seq", 1}, {"at", "2026-01-01T00:00:00Z"}, {"kind", "nope"}, {"payload", nullptr}});
          }) == ErrorCode::CorruptLog);
  }

  TEST_CASE("damaged log files are reported") {
    SyntheticStore s;
    std::string id = s.session_in(State::TestsFailed);
    fs::path log = s.data.path() / (id + ".events.jsonl");
    std::string good = read_file(log);
    write_file(log, good + "{\"seq\": 4, \"at\"");
    CHECK(code_of([&] { s.store.events(id); }) == ErrorCode::CorruptLog);
    write_file(log, good + "not json\n");
    CHECK(code_of([&] { s.store.state(id); }) == ErrorCode::CorruptLog);
    write_file(log, good);
    CHECK(s.store.state(id).state == State::TestsFailed);
  }

  TEST_CASE("usage report tallies") {
    std::vector<Event> log;
    auto add = [&](EventKind k, json payload = json::object()) {
      log.push_back({static_cast<long>(log.size()) + 1, "2026-01-01T00:00:00Z", k, std::move(payload)});
    };
    add(EventKind::RunE2e);
    add(EventKind::Locate);
    add(EventKind::RunE2e, {{"external_edit", true}});
    add(EventKind::Locate);
    add(EventKind::RunE2e);
    auto r = usage_report(log);
    CHECK(r.counts == std::map<std::string, int>{{"run_e2e", 3}, {"locate", 2}});
    CHECK(r.distinct_features == 2);
    CHECK(r.external_edits == 1);
    CHECK_FALSE(r.quiz_accuracy.has_value());
    CHECK(to_json(r)["quiz_accuracy"].is_null());

    add(EventKind::QuizAnswered, {{"is_correct", true}});
    add(EventKind::QuizAnswered, {{"is_correct", false}});
    add(EventKind::QuizAnswered, {{"is_correct", true}});
    r = usage_report(log);
    CHECK(r.quiz_answered == 3);
    CHECK(r.quiz_correct == 2);
    CHECK(*r.quiz_accuracy == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("concurrent dispatches are serialized") {
    SyntheticStore s;
    std::string id = s.store.create(s.config());
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 25; ++i) {
          s.store.dispatch(id, EventKind::Chat, {{"text", std::to_string(t) + ":" + std::to_string(i)}, {"reply", ""}});
        }
      });
    }
    // Readers see a consistent prefix while writers run.
    for (int i = 0; i < 20; ++i) {
      auto events = s.store.events(id);
      for (std::size_t k = 0; k < events.size(); ++k) CHECK(events[k].seq == static_cast<long>(k) + 1);
    }
    for (auto& th : threads) th.join();
    auto events = s.store.events(id);
    REQUIRE(events.size() == 200);
    std::set<std::string> texts;
    for (std::size_t k = 0; k < events.size(); ++k) {
      CHECK(events[k].seq == static_cast<long>(k) + 1);
      texts.insert(events[k].payload["text"].get<std::string>());
    }
    CHECK(texts.size() == 200);
    CHECK(replay(events).last_seq == 200);
  }

  TEST_CASE("transact runs work under the lock and records its event") {
    SyntheticStore s;
    std::string id = s.store.create(s.config());
    auto st = s.store.transact(id, [](const SessionState& cur) {
      CHECK(cur.state == State::Created);
      return std::make_pair(EventKind::RunE2e, failing_run_payload());
    });
    CHECK(st.state == State::TestsFailed);
    CHECK(code_of([&] {
            s.store.transact(id, [](const SessionState&) -> std::pair<EventKind, json> {
              throw Error(ErrorCode::Timeout, "slow");
            });
          }) == ErrorCode::Timeout);
    CHECK(s.store.events(id).size() == 1);
  }
}
