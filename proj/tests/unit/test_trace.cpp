// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <doctest.h>

#include "codehinter/error.hpp"
#include "codehinter/trace.hpp"
#include "codehinter/util.hpp"
#include "support.hpp"

using namespace codehinter;
using namespace codehinter::testing;
using nlohmann::json;

namespace {

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorCode::IoError, "unreachable");
}

json minimal() {
  return {{"schema_version", "codehinter-trace/1"},
          {"created_at", "2026-03-01T09:30:00Z"},
          {"adapter", "test"},
          {"spectrum",
           {{"subject_files", {"a.py"}},
            {"syntax_error", nullptr},
            {"records",
             {{{"test_id", "t1"}, {"outcome", "pass"}, {"message", nullptr}, {"covered", {{{"file", "a.py"}, {"line", 1}}}}}}}}}};
}


}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("minimal valid trace parses") {
    auto t = trace::parse_trace(minimal().dump());
    CHECK(t.schema_version == "codehinter-trace/1");
    REQUIRE(t.spectrum.records.size() == 1);
    CHECK(t.spectrum.records[0].test_id == "t1");
  }

  TEST_CASE("schema version must match exactly") {
    auto j = minimal();
    j["schema_version"] = "codehinter-trace/2";
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).code() == ErrorCode::SchemaMismatch);
  }

  TEST_CASE("validation errors carry a JSON path") {
    auto j = minimal();
    j["spectrum"]["syntax_error"] = {{"file", "a.py"}, {"line", 2}, {"message", "invalid syntax"}};
    auto e = error_of([&] { trace::parse_trace(j.dump()); });
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(e.details()["path"] == "$.spectrum.records");

    j = minimal();
    j["spectrum"]["records"][0]["extra"] = 1;
    e = error_of([&] { trace::parse_trace(j.dump()); });
    CHECK(e.code() == ErrorCode::ValidationError);
    CHECK(e.details()["path"] == "$.spectrum.records[0].extra");

    j = minimal();
    j["spectrum"]["records"][0]["covered"] = {{{"file", "c.py"}, {"line", 1}}};
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).code() == ErrorCode::ValidationError);

    j = minimal();
    j["spectrum"]["records"].push_back(j["spectrum"]["records"][0]);
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).details()["path"] == "$.spectrum.records[1].test_id");

    j = minimal();
    j["spectrum"]["records"][0]["covered"] = {{{"file", "a.py"}, {"line", 2}}, {{"file", "a.py"}, {"line", 1}}};
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).code() == ErrorCode::ValidationError);

    j = minimal();
    j["spectrum"]["records"][0]["outcome"] = "skipped";
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).code() == ErrorCode::ValidationError);

    j = minimal();
    j["created_at"] = "yesterday";
    CHECK(error_of([&] { trace::parse_trace(j.dump()); }).details()["path"] == "$.created_at");

    CHECK(error_of([] { trace::parse_trace("{not json"); }).code() == ErrorCode::ValidationError);
  }

  TEST_CASE("canonical fixtures round-trip byte for byte") {
    for (const char* name : {"minimal.json", "mixed.json", "syntax_error.json"}) {
      CAPTURE(name);
      std::string bytes = read_file(fixtures_dir() / "traces" / name);
      CHECK(trace::serialize_trace(trace::parse_trace(bytes)) == bytes);
    }
  }

  TEST_CASE("property: random traces round-trip") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      auto t = random_trace(rng);
      std::string once = trace::serialize_trace(t);
      CHECK(trace::parse_trace(once) == t);
      CHECK(trace::serialize_trace(trace::parse_trace(once)) == once);
    }
  }

  TEST_CASE("merge replaces, appends and checks subjects") {
    trace::TraceFile a, b;
    a.created_at = b.created_at = "2026-03-01T09:30:00Z";
    a.spectrum.subject_files = b.spectrum.subject_files = {"a.py"};
    a.spectrum.records = {record("t1", Outcome::Fail, {{"a.py", 1}})};
    b.spectrum.records = {record("t1", Outcome::Pass, {{"a.py", 1}})};
    auto m = trace::merge_traces(a, b);
    REQUIRE(m.spectrum.records.size() == 1);
    CHECK(m.spectrum.records[0].outcome == Outcome::Pass);

    b.spectrum.records = {record("t2", Outcome::Pass, {})};
    m = trace::merge_traces(a, b);
    REQUIRE(m.spectrum.records.size() == 2);
    CHECK(m.spectrum.records[0].test_id == "t1");
    CHECK(m.spectrum.records[1].test_id == "t2");

    b.spectrum.subject_files = {"b.py"};
    CHECK(error_of([&] { trace::merge_traces(a, b); }).code() == ErrorCode::SubjectMismatch);
  }

  TEST_CASE("merge with a syntax error keeps only the newer spectrum") {
    trace::TraceFile a, b;
    a.created_at = b.created_at = "2026-03-01T09:30:00Z";
    a.spectrum.subject_files = b.spectrum.subject_files = {"a.py"};
    a.spectrum.records = {record("t1", Outcome::Fail, {{"a.py", 1}})};
    b.spectrum.syntax_error = SyntaxErrorInfo{"a.py", 1, "invalid syntax"};
    auto m = trace::merge_traces(a, b);
    CHECK(m.spectrum.records.empty());
    CHECK(m.spectrum.syntax_error == b.spectrum.syntax_error);
    trace::validate(m);
  }

  TEST_CASE("property: merge is idempotent, right-biased and associative") {
    std::mt19937_64 rng(2026);
    for (int i = 0; i < 200; ++i) {
      auto a = random_trace(rng);
      auto b = random_trace(rng);
      auto c = random_trace(rng);
      CHECK(trace::merge_traces(a, a) == a);

      auto ab = trace::merge_traces(a, b);
      trace::validate(ab);
      for (const auto& r : b.spectrum.records) {
        auto it = std::find_if(ab.spectrum.records.begin(), ab.spectrum.records.end(),
                               [&](const TestRecord& x) { return x.test_id == r.test_id; });
        REQUIRE(it != ab.spectrum.records.end());
        CHECK(*it == r);
      }
      for (const auto& r : a.spectrum.records) {
        bool replaced = std::any_of(b.spectrum.records.begin(), b.spectrum.records.end(),
                                    [&](const TestRecord& x) { return x.test_id == r.test_id; });
        if (replaced) continue;
        CHECK(std::find(ab.spectrum.records.begin(), ab.spectrum.records.end(), r) != ab.spectrum.records.end());
      }
      std::size_t expected_size = a.spectrum.records.size();
      for (const auto& r : b.spectrum.records) {
        expected_size += std::none_of(a.spectrum.records.begin(), a.spectrum.records.end(),
                                      [&](const TestRecord& x) { return x.test_id == r.test_id; });
      }
      CHECK(ab.spectrum.records.size() == expected_size);
      CHECK(trace::merge_traces(ab, c) == trace::merge_traces(a, trace::merge_traces(b, c)));
    }
  }

  TEST_CASE("summarize counts outcomes") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.records = {record("p1", Outcome::Pass, {}), record("f1", Outcome::Fail, {}), record("p2", Outcome::Pass, {}),
                 record("f2", Outcome::Fail, {}), record("p3", Outcome::Pass, {})};
    s.records[1].message = "assert 3 == 4";
    s.records[3].message = "assert 'a' == 'b'";
    auto r = trace::summarize(s);
    // Counting oracle.
    int passed = 0, failed = 0, errored = 0;
    for (const auto& rec : s.records) {
      passed += rec.outcome == Outcome::Pass;
      failed += rec.outcome == Outcome::Fail;
      errored += rec.outcome == Outcome::Error;
    }
    CHECK(r.passed == passed);
    CHECK(r.failed == failed);
    CHECK(r.errored == errored);
    CHECK(r.passed == 3);
    CHECK(r.failed == 2);
    REQUIRE(r.failing.size() == 2);
    CHECK(r.failing[0].test_id == "f1");
    CHECK(r.failing[0].message == "assert 3 == 4");
    CHECK(r.failing[1].test_id == "f2");
    CHECK_FALSE(r.all_passed());
    CHECK(trace::report_from_json(trace::to_json(r)) == r);
  }

  TEST_CASE("summarize flags the syntax branch") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.syntax_error = SyntaxErrorInfo{"a.py", 2, "invalid syntax"};
    auto r = trace::summarize(s);
    CHECK(r.syntax_branch());
    CHECK(r.passed + r.failed + r.errored == 0);
    CHECK_FALSE(r.all_passed());

    s.syntax_error.reset();
    s.records = {record("p", Outcome::Pass, {})};
    CHECK(trace::summarize(s).failing.empty());
    CHECK(trace::summarize(s).all_passed());
  }

  TEST_CASE("RFC 3339 timestamps") {
    CHECK(trace::is_rfc3339(trace::utc_now_rfc3339()));
    CHECK(trace::is_rfc3339("2026-03-01T09:30:00+02:00"));
    CHECK(trace::is_rfc3339("2026-03-01T09:30:00.125Z"));
    CHECK_FALSE(trace::is_rfc3339("2026-03-01 09:30:00"));
    CHECK_FALSE(trace::is_rfc3339("2026-13-01T09:30:00Z"));
  }
}
