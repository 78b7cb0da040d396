// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/coverage.hpp"

#include "codehinter/error.hpp"

namespace codehinter {

bool is_normalized_path(std::string_view path) {
  if (path.empty() || path.front() == '/' || path.find('\\') != std::string_view::npos) return false;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    std::string_view segment = path.substr(start, end - start);
    if (segment.empty() || segment == "." || segment == "..") return false;
    start = end + 1;
  }
  return true;
}

void validate_location(const SourceLocation& location) {
  if (!is_normalized_path(location.file)) {
    throw Error(ErrorCode::MalformedLocation, "path is not a normalized relative path: '" + location.file + "'");
  }
  if (location.line < 1) {
    throw Error(ErrorCode::MalformedLocation,
                "line must be >= 1 (got " + std::to_string(location.line) + ") in " + location.file);
  }
}

std::string to_string(const SourceLocation& location) {
  return location.file + ":" + std::to_string(location.line);
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Error: return "error";
  }
  return "error";
}

std::optional<Outcome> parse_outcome(std::string_view name) {
  if (name == "pass") return Outcome::Pass;
  if (name == "fail") return Outcome::Fail;
  if (name == "error") return Outcome::Error;
  return std::nullopt;
}

}  // namespace codehinter
