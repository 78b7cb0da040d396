// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded-bug exercises. Layout of one exercise:
//
//   exercises/<id>/statement.md
//   exercises/<id>/solution/<subject files>
//   exercises/<id>/buggy/<variant>/<subject files>
//   exercises/<id>/tests/test_*.py
//   exercises/<id>/meta.json
//       {"title": string, "subject_files": [string],
//        "variants": {"<variant>": {"known_lines": [{"file", "line"}]}}}

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codehinter/coverage.hpp"
#include "codehinter/runner.hpp"

namespace codehinter::corpus {

inline constexpr int kMaxBuggyLines = 2;

struct Variant {
  std::string name;
  std::map<std::string, std::string> files;  // subject file -> text
  std::vector<SourceLocation> known_lines;
};

struct Exercise {
  std::string id;
  std::string title;
  std::string statement;
  std::vector<std::string> subject_files;
  std::map<std::string, std::string> solution;
  std::map<std::string, std::string> tests;  // "tests/test_x.py" -> text
  std::vector<Variant> variants;

  const Variant& variant(const std::string& name) const;  // throws CorpusInvalid
};

enum class Verify { Structure, Full };

/// Loads every exercise under `dir`, sorted by id. Full verification also
/// runs the tests: the reference passes, every variant fails, and every
/// known line is executed by a failing test. Throws CorpusInvalid.
std::vector<Exercise> load_corpus(const std::filesystem::path& dir, Verify verify = Verify::Full);

Exercise load_exercise(const std::filesystem::path& dir);
void verify_structure(const Exercise& exercise);
void verify_behaviour(const Exercise& exercise);

/// Writes a runnable project for `variant` (empty: the reference solution)
/// into `dest`, including codehinter.json, and returns its config.
runner::ProjectConfig materialize(const Exercise& exercise, const std::string& variant,
                                  const std::filesystem::path& dest);

/// The line singled out by a clean signal: covered by every failing test
/// and no passing test, while every other covered line is covered by some
/// passing test.
std::optional<SourceLocation> clean_signal_line(const CoverageSpectrum& spectrum);

}  // namespace codehinter::corpus
