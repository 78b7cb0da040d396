// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// The trace file: how a test-runner adapter reports outcomes and per-test
// coverage. Wire format (UTF-8 JSON):
//
//   {"schema_version": "codehinter-trace/1", "created_at": RFC3339,
//    "adapter": string,
//    "spectrum": {"subject_files": [string],
//                 "syntax_error": null | {"file", "line", "message"},
//                 "records": [{"test_id", "outcome": "pass"|"fail"|"error",
//                              "message": string|null,
//                              "covered": [{"file", "line"}]}]}}

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/coverage.hpp"

namespace codehinter::trace {

inline constexpr std::string_view kSchemaVersion = "codehinter-trace/1";

struct TraceFile {
  std::string schema_version{kSchemaVersion};
  std::string created_at;  // RFC 3339, UTC
  std::string adapter;
  CoverageSpectrum spectrum;
  bool operator==(const TraceFile&) const = default;
};

/// Parses and validates. Throws SchemaMismatch for a wrong version and
/// ValidationError (details: {"path": "$.spectrum..."}) otherwise.
TraceFile parse_trace(std::string_view bytes);

/// Canonical form: sorted keys, two-space indent, trailing newline.
std::string serialize_trace(const TraceFile& trace);

/// Throws ValidationError if any invariant is violated.
void validate(const TraceFile& trace);

/// Records from `b` replace same-id records from `a`; new ids are appended
/// in `b` order. A syntax error in `b` means nothing ran, so the result is
/// `b`'s spectrum. Throws SubjectMismatch.
TraceFile merge_traces(const TraceFile& a, const TraceFile& b);

struct FailingTest {
  std::string test_id;
  Outcome outcome = Outcome::Fail;
  std::string message;
  bool operator==(const FailingTest&) const = default;
};

/// What the user sees after an End-to-End Test.
struct TestReport {
  int passed = 0;
  int failed = 0;
  int errored = 0;
  std::vector<FailingTest> failing;
  std::optional<SyntaxErrorInfo> syntax_error;

  bool syntax_branch() const { return syntax_error.has_value(); }
  bool all_passed() const { return !syntax_branch() && failed == 0 && errored == 0; }
  bool operator==(const TestReport&) const = default;
};

TestReport summarize(const CoverageSpectrum& spectrum);

nlohmann::json to_json(const TestReport& report);
TestReport report_from_json(const nlohmann::json& j);

nlohmann::json spectrum_to_json(const CoverageSpectrum& spectrum);
/// Throws ValidationError.
CoverageSpectrum spectrum_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TraceFile& trace);

/// Current UTC time as RFC 3339 with second precision.
std::string utc_now_rfc3339();
bool is_rfc3339(std::string_view text);

}  // namespace codehinter::trace
