// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// The End-to-End Test: snapshot the subject files, run the adapter as a
// subprocess, ingest its trace.
//
// Adapter contract: the command template may use {TRACE_OUT} and
// {PROJECT_ROOT}. The adapter exits 0 after writing a valid trace, even
// when tests fail, and exits nonzero only on infrastructure failure.
// Diagnostics written by instrumented code are collected from the JSON-lines
// file named by CODEHINTER_DEBUG_OUT when that variable is set.

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/coverage.hpp"
#include "codehinter/trace.hpp"

namespace codehinter::runner {

inline constexpr double kDefaultTimeoutSeconds = 60.0;
inline constexpr int kDefaultMaxBuggyLines = 2;
inline constexpr std::string_view kStubAdapter = "codehinter-stub-adapter";
inline constexpr std::string_view kConfigFileName = "codehinter.json";

struct ExerciseSpec {
  std::string statement;
  std::optional<std::map<std::string, std::string>> reference_solution;  // file -> text
  int max_buggy_lines = kDefaultMaxBuggyLines;
  bool operator==(const ExerciseSpec&) const = default;
};

struct ProjectConfig {
  std::filesystem::path root;
  std::vector<std::string> subject_files;
  std::vector<std::string> adapter_command;  // empty: the bundled stub adapter
  double timeout_seconds = kDefaultTimeoutSeconds;
  std::optional<ExerciseSpec> exercise;
  bool operator==(const ProjectConfig&) const = default;
};

/// Throws ConfigInvalid.
void validate_config(const ProjectConfig& config);

/// Relative roots resolve against `base`. Throws ConfigInvalid.
ProjectConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
nlohmann::json to_json(const ProjectConfig& config);

/// Reads DIR/codehinter.json; a relative root is taken relative to DIR.
ProjectConfig load_project_config(const std::filesystem::path& dir);

/// The argument vector actually executed, placeholders substituted.
std::vector<std::string> expand_command(const ProjectConfig& config, const std::filesystem::path& root,
                                        const std::filesystem::path& trace_out);

struct FileSnapshot {
  std::string content;
  std::string hash;
  bool operator==(const FileSnapshot&) const = default;
};

struct SourceSnapshot {
  std::map<std::string, FileSnapshot> files;

  /// Hash over every (file, hash) pair.
  std::string hash() const;
  const std::string& content(const std::string& file) const;  // throws IoError
  bool operator==(const SourceSnapshot&) const = default;
};

SourceSnapshot make_snapshot(const std::map<std::string, std::string>& contents);

/// Throws IoError naming the first unreadable file.
SourceSnapshot snapshot_source(const ProjectConfig& config);

struct DebugLine {
  std::string test_id;
  std::string text;
  bool operator==(const DebugLine&) const = default;
};

struct AdapterRun {
  CoverageSpectrum spectrum;
  std::vector<DebugLine> debug;  // only when requested
};

/// Runs the adapter against `root`, which may be a shadow copy.
/// Throws AdapterFailure, Timeout, TraceInvalid.
AdapterRun run_adapter(const ProjectConfig& config, const std::filesystem::path& root, bool capture_debug = false);

struct RunResult {
  trace::TestReport report;
  CoverageSpectrum spectrum;
  SourceSnapshot snapshot;
};

RunResult run_end_to_end(const ProjectConfig& config);

/// Copies the project into `dest` and overwrites the given files.
void write_shadow_copy(const ProjectConfig& config, const std::filesystem::path& dest,
                       const std::map<std::string, std::string>& overrides);

}  // namespace codehinter::runner
