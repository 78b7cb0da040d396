// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/trace.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <map>
#include <regex>
#include <set>

#include "codehinter/error.hpp"

namespace codehinter::trace {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ValidationError, path + ": " + message, json{{"path", path}});
}

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end()) {
      fail(path + "." + key, "unknown field");
    }
  }
  for (const char* k : keys) {
    if (!j.contains(k)) fail(path + "." + k, "missing field");
  }
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

int get_line(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  auto v = j.get<long long>();
  if (v < 1 || v > 100'000'000) fail(path, "line must be >= 1");
  return static_cast<int>(v);
}

SourceLocation parse_location(const json& j, const std::string& path) {
  expect_object(j, path, {"file", "line"});
  SourceLocation loc{get_string(j["file"], path + ".file"), get_line(j["line"], path + ".line")};
  if (!is_normalized_path(loc.file)) fail(path + ".file", "path is not normalized: '" + loc.file + "'");
  return loc;
}

CoverageSpectrum parse_spectrum(const json& j, const std::string& path) {
  expect_object(j, path, {"subject_files", "syntax_error", "records"});
  CoverageSpectrum s;

  const json& subjects = j["subject_files"];
  if (!subjects.is_array()) fail(path + ".subject_files", "expected an array");
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    std::string p = path + ".subject_files[" + std::to_string(i) + "]";
    std::string file = get_string(subjects[i], p);
    if (!is_normalized_path(file)) fail(p, "path is not normalized: '" + file + "'");
    s.subject_files.push_back(std::move(file));
  }

  const json& se = j["syntax_error"];
  if (!se.is_null()) {
    std::string p = path + ".syntax_error";
    expect_object(se, p, {"file", "line", "message"});
    s.syntax_error = SyntaxErrorInfo{get_string(se["file"], p + ".file"), get_line(se["line"], p + ".line"),
                                     get_string(se["message"], p + ".message")};
  }

  const json& records = j["records"];
  if (!records.is_array()) fail(path + ".records", "expected an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string p = path + ".records[" + std::to_string(i) + "]";
    const json& r = records[i];
    expect_object(r, p, {"test_id", "outcome", "message", "covered"});
    TestRecord rec;
    rec.test_id = get_string(r["test_id"], p + ".test_id");
    auto outcome = parse_outcome(get_string(r["outcome"], p + ".outcome"));
    if (!outcome) fail(p + ".outcome", "expected pass, fail or error");
    rec.outcome = *outcome;
    if (!r["message"].is_null()) rec.message = get_string(r["message"], p + ".message");
    const json& covered = r["covered"];
    if (!covered.is_array()) fail(p + ".covered", "expected an array");
    for (std::size_t k = 0; k < covered.size(); ++k) {
      rec.covered.push_back(parse_location(covered[k], p + ".covered[" + std::to_string(k) + "]"));
    }
    s.records.push_back(std::move(rec));
  }
  return s;
}

json location_json(const SourceLocation& loc) { return {{"file", loc.file}, {"line", loc.line}}; }

}  // namespace

bool is_rfc3339(std::string_view text) {
  static const std::regex kPattern(
      R"(^\d{4}-(0[1-9]|1[0-2])-(0[1-9]|[12]\d|3[01])[Tt]([01]\d|2[0-3]):[0-5]\d:([0-5]\d|60)(\.\d+)?([Zz]|[+-]([01]\d|2[0-3]):[0-5]\d)$)");
  return std::regex_match(text.begin(), text.end(), kPattern);
}

std::string utc_now_rfc3339() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void validate(const TraceFile& trace) {
  if (trace.schema_version != kSchemaVersion) {
    throw Error(ErrorCode::SchemaMismatch, "unsupported schema_version '" + trace.schema_version + "' (expected '" +
                                               std::string(kSchemaVersion) + "')");
  }
  if (!is_rfc3339(trace.created_at)) fail("$.created_at", "not an RFC 3339 timestamp");

  const auto& s = trace.spectrum;
  std::set<std::string> subjects;
  for (std::size_t i = 0; i < s.subject_files.size(); ++i) {
    if (!is_normalized_path(s.subject_files[i])) {
      fail("$.spectrum.subject_files[" + std::to_string(i) + "]", "path is not normalized");
    }
    if (!subjects.insert(s.subject_files[i]).second) {
      fail("$.spectrum.subject_files[" + std::to_string(i) + "]", "duplicate subject file");
    }
  }
  if (s.syntax_error) {
    if (s.syntax_error->line < 1) fail("$.spectrum.syntax_error.line", "line must be >= 1");
    if (!s.records.empty()) fail("$.spectrum.records", "must be empty when syntax_error is present");
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    const std::string p = "$.spectrum.records[" + std::to_string(i) + "]";
    if (r.test_id.empty()) fail(p + ".test_id", "must be non-empty");
    if (!ids.insert(r.test_id).second) fail(p + ".test_id", "duplicate test_id '" + r.test_id + "'");
    for (std::size_t k = 0; k < r.covered.size(); ++k) {
      const auto& loc = r.covered[k];
      const std::string lp = p + ".covered[" + std::to_string(k) + "]";
      if (!is_normalized_path(loc.file)) fail(lp + ".file", "path is not normalized");
      if (loc.line < 1) fail(lp + ".line", "line must be >= 1");
      if (!subjects.contains(loc.file)) fail(lp + ".file", "'" + loc.file + "' is not a subject file");
      if (k > 0 && !(r.covered[k - 1] < loc)) fail(lp, "covered list must be sorted and free of duplicates");
    }
  }
}

TraceFile parse_trace(std::string_view bytes) {
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("$", "expected an object");
  if (!j.contains("schema_version")) fail("$.schema_version", "missing field");
  if (!j["schema_version"].is_string() || j["schema_version"].get<std::string>() != kSchemaVersion) {
    throw Error(ErrorCode::SchemaMismatch,
                "unsupported schema_version " + j["schema_version"].dump() + " (expected '" +
                    std::string(kSchemaVersion) + "')");
  }
  expect_object(j, "$", {"schema_version", "created_at", "adapter", "spectrum"});
  TraceFile trace;
  trace.created_at = get_string(j["created_at"], "$.created_at");
  trace.adapter = get_string(j["adapter"], "$.adapter");
  trace.spectrum = parse_spectrum(j["spectrum"], "$.spectrum");
  validate(trace);
  return trace;
}

json spectrum_to_json(const CoverageSpectrum& s) {
  json records = json::array();
  for (const auto& r : s.records) {
    json covered = json::array();
    for (const auto& loc : r.covered) covered.push_back(location_json(loc));
    records.push_back({{"test_id", r.test_id},
                       {"outcome", outcome_name(r.outcome)},
                       {"message", r.message ? json(*r.message) : json(nullptr)},
                       {"covered", std::move(covered)}});
  }
  json syntax = nullptr;
  if (s.syntax_error) {
    syntax = {{"file", s.syntax_error->file}, {"line", s.syntax_error->line}, {"message", s.syntax_error->message}};
  }
  return {{"subject_files", s.subject_files}, {"syntax_error", std::move(syntax)}, {"records", std::move(records)}};
}

CoverageSpectrum spectrum_from_json(const json& j) { return parse_spectrum(j, "$"); }

json to_json(const TraceFile& trace) {
  return {{"schema_version", trace.schema_version},
          {"created_at", trace.created_at},
          {"adapter", trace.adapter},
          {"spectrum", spectrum_to_json(trace.spectrum)}};
}

std::string serialize_trace(const TraceFile& trace) { return to_json(trace).dump(2) + "\n"; }

TraceFile merge_traces(const TraceFile& a, const TraceFile& b) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(a.spectrum.subject_files) != sorted(b.spectrum.subject_files)) {
    throw Error(ErrorCode::SubjectMismatch, "traces cover different subject files");
  }
  TraceFile merged = b;
  merged.spectrum.subject_files = a.spectrum.subject_files;
  if (b.spectrum.syntax_error) return merged;

  merged.spectrum.records.clear();
  std::map<std::string, const TestRecord*> newer;
  for (const auto& r : b.spectrum.records) newer[r.test_id] = &r;
  for (const auto& r : a.spectrum.records) {
    auto it = newer.find(r.test_id);
    merged.spectrum.records.push_back(it == newer.end() ? r : *it->second);
  }
  std::set<std::string> seen;
  for (const auto& r : a.spectrum.records) seen.insert(r.test_id);
  for (const auto& r : b.spectrum.records) {
    if (!seen.contains(r.test_id)) merged.spectrum.records.push_back(r);
  }
  merged.spectrum.syntax_error.reset();
  return merged;
}

TestReport summarize(const CoverageSpectrum& spectrum) {
  TestReport report;
  report.syntax_error = spectrum.syntax_error;
  if (report.syntax_error) return report;
  for (const auto& r : spectrum.records) {
    switch (r.outcome) {
      case Outcome::Pass: ++report.passed; break;
      case Outcome::Fail: ++report.failed; break;
      case Outcome::Error: ++report.errored; break;
    }
    if (r.failing()) report.failing.push_back({r.test_id, r.outcome, r.message.value_or("")});
  }
  return report;
}

json to_json(const TestReport& report) {
  json failing = json::array();
  for (const auto& f : report.failing) {
    failing.push_back({{"test_id", f.test_id}, {"outcome", outcome_name(f.outcome)}, {"message", f.message}});
  }
  json syntax = nullptr;
  if (report.syntax_error) {
    syntax = {{"file", report.syntax_error->file},
              {"line", report.syntax_error->line},
              {"message", report.syntax_error->message}};
  }
  return {{"passed", report.passed},   {"failed", report.failed},
          {"errored", report.errored}, {"failing", std::move(failing)},
          {"syntax_error", syntax},    {"syntax_branch", report.syntax_branch()}};
}

TestReport report_from_json(const json& j) {
  TestReport r;
  r.passed = j.at("passed").get<int>();
  r.failed = j.at("failed").get<int>();
  r.errored = j.at("errored").get<int>();
  for (const auto& f : j.at("failing")) {
    r.failing.push_back({f.at("test_id").get<std::string>(),
                         parse_outcome(f.at("outcome").get<std::string>()).value_or(Outcome::Fail),
                         f.at("message").get<std::string>()});
  }
  if (j.contains("syntax_error") && !j["syntax_error"].is_null()) {
    const auto& s = j["syntax_error"];
    r.syntax_error = SyntaxErrorInfo{s.at("file").get<std::string>(), s.at("line").get<int>(),
                                     s.at("message").get<std::string>()};
  }
  return r;
}

}  // namespace codehinter::trace
