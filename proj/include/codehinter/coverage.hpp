// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codehinter {

/// A line in a subject file. `file` is a normalized relative path.
struct SourceLocation {
  std::string file;
  int line = 0;

  auto operator<=>(const SourceLocation&) const = default;
  bool operator==(const SourceLocation&) const = default;
};

/// True for relative, forward-slash paths without "." / ".." / empty segments.
bool is_normalized_path(std::string_view path);

/// Throws Error(MalformedLocation) unless the location is well formed.
void validate_location(const SourceLocation& location);

std::string to_string(const SourceLocation& location);

enum class Outcome { Pass, Fail, Error };

std::string_view outcome_name(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view name);

struct TestRecord {
  std::string test_id;
  Outcome outcome = Outcome::Pass;
  std::optional<std::string> message;
  std::vector<SourceLocation> covered;  // sorted, unique

  // `fail` and `error` both count as failing for fault localization.
  bool failing() const { return outcome != Outcome::Pass; }
  bool operator==(const TestRecord&) const = default;
};

struct SyntaxErrorInfo {
  std::string file;
  int line = 0;
  std::string message;
  bool operator==(const SyntaxErrorInfo&) const = default;
};

struct CoverageSpectrum {
  std::vector<TestRecord> records;
  std::vector<std::string> subject_files;
  std::optional<SyntaxErrorInfo> syntax_error;
  bool operator==(const CoverageSpectrum&) const = default;
};

}  // namespace codehinter
