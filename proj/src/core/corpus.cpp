// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/corpus.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "codehinter/error.hpp"
#include "codehinter/patch.hpp"
#include "codehinter/spectrum.hpp"
#include "codehinter/util.hpp"

namespace codehinter::corpus {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(const std::string& exercise, const std::string& invariant, const std::string& message,
                          const std::string& variant = "") {
  json details = {{"exercise", exercise}, {"invariant", invariant}};
  if (!variant.empty()) details["variant"] = variant;
  throw Error(ErrorCode::CorpusInvalid,
              exercise + (variant.empty() ? "" : "/" + variant) + ": " + message, std::move(details));
}

std::map<std::string, std::string> read_subjects(const Exercise& ex, const fs::path& dir, const std::string& variant) {
  std::map<std::string, std::string> out;
  for (const auto& f : ex.subject_files) {
    if (!fs::is_regular_file(dir / f)) invalid(ex.id, "layout", "missing " + (dir / f).string(), variant);
    out[f] = read_file(dir / f);
  }
  return out;
}

}  // namespace

const Variant& Exercise::variant(const std::string& name) const {
  for (const auto& v : variants) {
    if (v.name == name) return v;
  }
  invalid(id, "layout", "no variant '" + name + "'");
}

Exercise load_exercise(const fs::path& dir) {
  Exercise ex;
  ex.id = dir.filename().string();
  json meta;
  try {
    meta = json::parse(read_file(dir / "meta.json"));
    ex.title = meta.value("title", ex.id);
    ex.subject_files = meta.at("subject_files").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    invalid(ex.id, "meta", std::string("meta.json: ") + e.what());
  } catch (const Error& e) {
    invalid(ex.id, "meta", e.what());
  }
  if (ex.subject_files.empty()) invalid(ex.id, "meta", "no subject files");
  for (const auto& f : ex.subject_files) {
    if (!is_normalized_path(f)) invalid(ex.id, "meta", "subject file path is not normalized: '" + f + "'");
  }
  if (!fs::is_regular_file(dir / "statement.md")) invalid(ex.id, "layout", "missing statement.md");
  ex.statement = read_file(dir / "statement.md");
  ex.solution = read_subjects(ex, dir / "solution", "");

  if (fs::is_directory(dir / "tests")) {
    for (const auto& entry : fs::directory_iterator(dir / "tests")) {
      std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.ends_with(".py")) ex.tests["tests/" + name] = read_file(entry.path());
    }
  }
  if (ex.tests.empty()) invalid(ex.id, "layout", "no tests under tests/");

  const json variants = meta.value("variants", json::object());
  if (!variants.is_object() || variants.empty()) invalid(ex.id, "meta", "no buggy variants");
  for (const auto& [name, v] : variants.items()) {
    Variant variant;
    variant.name = name;
    variant.files = read_subjects(ex, dir / "buggy" / name, name);
    try {
      for (const auto& loc : v.at("known_lines")) {
        variant.known_lines.push_back({loc.at("file").get<std::string>(), loc.at("line").get<int>()});
      }
    } catch (const json::exception& e) {
      invalid(ex.id, "meta", std::string("known_lines: ") + e.what(), name);
    }
    ex.variants.push_back(std::move(variant));
  }
  return ex;
}

void verify_structure(const Exercise& ex) {
  for (const auto& v : ex.variants) {
    if (v.known_lines.empty() || v.known_lines.size() > kMaxBuggyLines) {
      invalid(ex.id, "known_lines", "a variant needs 1 to " + std::to_string(kMaxBuggyLines) + " known lines", v.name);
    }
    int changed = 0;
    std::set<SourceLocation> diff_lines;
    for (const auto& f : ex.subject_files) {
      changed += patch::changed_line_count(ex.solution.at(f), v.files.at(f));
      auto before = patch::split_lines(v.files.at(f)).lines;
      auto after = patch::split_lines(ex.solution.at(f)).lines;
      for (const auto& h : patch::line_diff(before, after)) {
        for (std::size_t i = 0; i < h.removed.size(); ++i) diff_lines.insert({f, h.old_start + static_cast<int>(i)});
      }
    }
    if (changed == 0) invalid(ex.id, "differs", "the variant is identical to the reference", v.name);
    if (changed > kMaxBuggyLines) {
      invalid(ex.id, "line_diff", "the variant differs from the reference in " + std::to_string(changed) + " lines",
              v.name);
    }
    for (const auto& loc : v.known_lines) {
      if (!diff_lines.contains(loc)) {
        invalid(ex.id, "known_lines", to_string(loc) + " is not a changed line", v.name);
      }
    }
  }
}

runner::ProjectConfig materialize(const Exercise& ex, const std::string& variant, const fs::path& dest) {
  const auto& files = variant.empty() ? ex.solution : ex.variant(variant).files;
  auto put = [&](const std::string& f, const std::string& text) {
    fs::create_directories((dest / f).parent_path());
    write_file(dest / f, text);
  };
  for (const auto& [f, text] : files) put(f, text);
  for (const auto& [f, text] : ex.tests) put(f, text);
  runner::ProjectConfig config;
  config.root = dest;
  config.subject_files = ex.subject_files;
  config.exercise = runner::ExerciseSpec{ex.statement, ex.solution, kMaxBuggyLines};
  json j = runner::to_json(config);
  j["root"] = ".";
  write_file(dest / runner::kConfigFileName, j.dump(2) + "\n");
  return config;
}

void verify_behaviour(const Exercise& ex) {
  {
    TempDir dir("codehinter-corpus");
    auto run = runner::run_end_to_end(materialize(ex, "", dir.path()));
    if (!run.report.all_passed()) invalid(ex.id, "reference_green", "the reference solution fails its tests");
  }
  for (const auto& v : ex.variants) {
    TempDir dir("codehinter-corpus");
    auto run = runner::run_end_to_end(materialize(ex, v.name, dir.path()));
    if (run.report.all_passed()) invalid(ex.id, "buggy_red", "the buggy variant passes every test", v.name);
    if (run.spectrum.syntax_error) {
      const auto& se = *run.spectrum.syntax_error;
      bool known = std::any_of(v.known_lines.begin(), v.known_lines.end(), [&](const SourceLocation& l) {
        return l.file == se.file && std::abs(l.line - se.line) <= 1;
      });
      if (!known) invalid(ex.id, "signal", "the syntax error is reported away from the known lines", v.name);
      continue;
    }
    for (const auto& loc : v.known_lines) {
      bool executed = std::any_of(run.spectrum.records.begin(), run.spectrum.records.end(), [&](const TestRecord& r) {
        return r.failing() && std::binary_search(r.covered.begin(), r.covered.end(), loc);
      });
      if (!executed) invalid(ex.id, "signal", to_string(loc) + " is not executed by any failing test", v.name);
    }
  }
}

std::vector<Exercise> load_corpus(const fs::path& dir, Verify verify) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::CorpusInvalid, "not a directory: " + dir.string(), {{"invariant", "layout"}});
  }
  std::vector<Exercise> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) out.push_back(load_exercise(entry.path()));
  }
  std::sort(out.begin(), out.end(), [](const Exercise& a, const Exercise& b) { return a.id < b.id; });
  for (const auto& ex : out) {
    verify_structure(ex);
    if (verify == Verify::Full) verify_behaviour(ex);
  }
  return out;
}

std::optional<SourceLocation> clean_signal_line(const CoverageSpectrum& spectrum) {
  auto counts = spectrum::derive_counts(spectrum);
  int failing = 0;
  for (const auto& r : spectrum.records) failing += r.failing() ? 1 : 0;
  if (failing == 0) return std::nullopt;
  std::optional<SourceLocation> found;
  for (const auto& [loc, c] : counts) {
    if (c.ef == failing && c.ep == 0) {
      if (found) return std::nullopt;
      found = loc;
    } else if (c.ep == 0) {
      return std::nullopt;
    }
  }
  return found;
}

}  // namespace codehinter::corpus
