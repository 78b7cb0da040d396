// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Test-runner adapter for the exercise corpus. Runs tests/test_*.py (or
// test_*.py at the project root) under the embedded interpreter and writes a
// codehinter-trace/1 file.
//
//   codehinter-stub-adapter --root DIR --out TRACE --subject solution.py
//
// Exit 0 whenever a trace was written, including when tests fail or a
// subject file does not parse. Exit 3 on infrastructure failure.
//
// If CODEHINTER_DEBUG_OUT is set, everything a test wrote to stderr is
// appended there as JSON lines {"test_id", "text"}.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "codehinter/trace.hpp"
#include "minipy/interpreter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxMessage = 2000;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> discover_tests(const fs::path& root) {
  std::vector<std::string> found;
  for (const char* dir : {"tests", ""}) {
    fs::path base = root / dir;
    if (!fs::is_directory(base)) continue;
    for (const auto& entry : fs::directory_iterator(base)) {
      std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("test_") && name.ends_with(".py")) {
        found.push_back(*dir ? std::string(dir) + "/" + name : name);
      }
    }
    if (!found.empty()) break;
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::string truncate(std::string text) {
  if (text.size() > kMaxMessage) text.resize(kMaxMessage);
  return text;
}

void write_atomically(const fs::path& out, const std::string& bytes) {
  fs::path tmp = out;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << bytes;
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, out);
}

int run(const fs::path& root, const fs::path& out, const std::vector<std::string>& subjects) {
  codehinter::trace::TraceFile trace;
  trace.created_at = codehinter::trace::utc_now_rfc3339();
  trace.adapter = "codehinter-stub-adapter/1";
  trace.spectrum.subject_files = subjects;

  for (const auto& subject : subjects) {
    try {
      minipy::parse_module(subject, read_file(root / subject));
    } catch (const minipy::SyntaxError& e) {
      trace.spectrum.syntax_error = codehinter::SyntaxErrorInfo{subject, e.line(), e.what()};
      write_atomically(out, codehinter::trace::serialize_trace(trace));
      return 0;
    }
  }

  std::ofstream debug;
  if (const char* debug_path = std::getenv("CODEHINTER_DEBUG_OUT"); debug_path && *debug_path) {
    debug.open(debug_path, std::ios::binary | std::ios::app);
    if (!debug) throw std::runtime_error(std::string("cannot open debug stream ") + debug_path);
  }

  std::set<std::string> subject_set(subjects.begin(), subjects.end());
  for (const auto& test_file : discover_tests(root)) {
    minipy::Interpreter interp(root, subject_set);
    std::vector<minipy::TestResult> results;
    try {
      results = interp.run_test_file(test_file);
    } catch (const minipy::SyntaxError& e) {
      throw std::runtime_error(test_file + ":" + std::to_string(e.line()) + ": " + e.what());
    }
    for (auto& r : results) {
      codehinter::TestRecord rec;
      rec.test_id = test_file + "::" + r.name;
      switch (r.verdict) {
        case minipy::TestVerdict::Pass: rec.outcome = codehinter::Outcome::Pass; break;
        case minipy::TestVerdict::Fail: rec.outcome = codehinter::Outcome::Fail; break;
        case minipy::TestVerdict::Error: rec.outcome = codehinter::Outcome::Error; break;
      }
      if (r.verdict != minipy::TestVerdict::Pass) rec.message = truncate(r.message);
      for (const auto& [file, line] : r.covered) rec.covered.push_back({file, line});
      if (debug.is_open() && !r.stderr_text.empty()) {
        debug << json{{"test_id", rec.test_id}, {"text", r.stderr_text}}.dump() << "\n";
      }
      trace.spectrum.records.push_back(std::move(rec));
    }
  }
  codehinter::trace::validate(trace);
  write_atomically(out, codehinter::trace::serialize_trace(trace));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs a project's tests and writes a coverage trace"};
  std::string root;
  std::string out;
  std::vector<std::string> subjects;
  app.add_option("--root", root, "Project root")->required()->check(CLI::ExistingDirectory);
  app.add_option("--out", out, "Trace output path")->required();
  app.add_option("--subject", subjects, "Subject file, relative to the root")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    return run(root, out, subjects);
  } catch (const std::exception& e) {
    std::cerr << "codehinter-stub-adapter: " << e.what() << "\n";
    return 3;
  }
}
