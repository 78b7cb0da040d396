// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <doctest.h>

#include "codehinter/corpus.hpp"
#include "codehinter/error.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/util.hpp"
#include "support.hpp"

using namespace codehinter;
using namespace codehinter::corpus;
using namespace codehinter::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// The invariant named by a CorpusInvalid error.
std::string invariant_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CorpusInvalid) return "wrong code";
    return e.details()["invariant"].get<std::string>();
  }
  return "no error";
}

// A scratch copy of one exercise that tests may damage.
struct Scratch {
  TempDir dir{"codehinter-corpus"};
  fs::path root;

  explicit Scratch(const std::string& id = "running-sum") : root(dir.path() / id) {
    fs::copy(corpus_dir() / id, root, fs::copy_options::recursive);
  }

  fs::path variant_file() const { return root / "buggy" / "subtracts" / "solution.py"; }
};

CoverageSpectrum spectrum_of(std::vector<TestRecord> records) {
  CoverageSpectrum s;
  s.subject_files = {"a.py"};
  s.records = std::move(records);
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("the shipped corpus verifies") {
    auto exercises = load_corpus(corpus_dir(), Verify::Full);
    CHECK(exercises.size() >= 10);
    std::set<std::string> ids;
    std::size_t variants = 0;
    for (const auto& ex : exercises) {
      ids.insert(ex.id);
      variants += ex.variants.size();
      CHECK_FALSE(ex.statement.empty());
      CHECK_FALSE(ex.title.empty());
      for (const auto& v : ex.variants) {
        CHECK(v.known_lines.size() >= 1);
        CHECK(v.known_lines.size() <= static_cast<std::size_t>(kMaxBuggyLines));
      }
    }
    CHECK(ids.count("move-zeroes") == 1);
    CHECK(ids.count("summary-ranges") == 1);
    CHECK(variants >= 20);
    CHECK(std::is_sorted(exercises.begin(), exercises.end(),
                         [](const Exercise& a, const Exercise& b) { return a.id < b.id; }));
  }

  TEST_CASE("materialize writes a runnable project") {
    auto ex = load_exercise(corpus_dir() / "running-sum");
    TempDir dest("codehinter-materialize");
    auto config = materialize(ex, "subtracts", dest.path());
    CHECK(fs::exists(dest.path() / "codehinter.json"));
    auto loaded = runner::load_project_config(dest.path());
    CHECK(loaded.subject_files == config.subject_files);
    CHECK(loaded.exercise == config.exercise);
    REQUIRE(config.exercise.has_value());
    CHECK(config.exercise->statement == ex.statement);
    CHECK(read_file(dest.path() / "solution.py") == ex.variant("subtracts").files.at("solution.py"));
    auto run = runner::run_end_to_end(config);
    CHECK_FALSE(run.report.all_passed());

    TempDir ref("codehinter-materialize");
    auto ref_config = materialize(ex, "", ref.path());
    CHECK(runner::run_end_to_end(ref_config).report.all_passed());
    CHECK_THROWS_AS(ex.variant("nope"), Error);
  }

  TEST_CASE("a variant that passes its tests is rejected") {
    Scratch s;
    // Equivalent rewrite: still differs from the reference, but passes.
    std::string text = read_file(s.variant_file());
    auto at = text.find("total -= nums[i]");
    REQUIRE(at != std::string::npos);
    text.replace(at, 16, "total = total + nums[i]");
    write_file(s.variant_file(), text);
    auto ex = load_exercise(s.root);
    verify_structure(ex);
    CHECK(invariant_of([&] { verify_behaviour(ex); }) == "buggy_red");
  }

  TEST_CASE("a variant touching three lines is rejected") {
    Scratch s;
    std::string text = read_file(s.root / "solution" / "solution.py");
    auto replace = [&](const std::string& from, const std::string& to) {
      auto at = text.find(from);
      REQUIRE(at != std::string::npos);
      text.replace(at, from.size(), to);
    };
    replace("result = []", "result = list()");
    replace("total = 0", "total = 0 * 1");
    replace("total += nums[i]", "total -= nums[i]");
    write_file(s.variant_file(), text);
    CHECK(invariant_of([&] { verify_structure(load_exercise(s.root)); }) == "line_diff");
  }

  TEST_CASE("structural defects are named") {
    {
      Scratch s;
      write_file(s.variant_file(), read_file(s.root / "solution" / "solution.py"));
      CHECK(invariant_of([&] { verify_structure(load_exercise(s.root)); }) == "differs");
    }
    {
      Scratch s;
      json meta = json::parse(read_file(s.root / "meta.json"));
      meta["variants"]["subtracts"]["known_lines"] = json::array({{{"file", "solution.py"}, {"line", 2}}});
      write_file(s.root / "meta.json", meta.dump(2));
      CHECK(invariant_of([&] { verify_structure(load_exercise(s.root)); }) == "known_lines");
    }
    {
      Scratch s;
      fs::remove(s.root / "statement.md");
      CHECK(invariant_of([&] { load_exercise(s.root); }) == "layout");
    }
    {
      Scratch s;
      write_file(s.root / "meta.json", "{");
      CHECK(invariant_of([&] { load_exercise(s.root); }) == "meta");
    }
    {
      Scratch s;
      std::string text = read_file(s.root / "solution" / "solution.py");
      text.replace(text.find("total += nums[i]"), 16, "total += 2 * nums[i]");
      write_file(s.root / "solution" / "solution.py", text);
      CHECK(invariant_of([&] { verify_behaviour(load_exercise(s.root)); }) == "reference_green");
    }
    CHECK(invariant_of([] { load_corpus("/nonexistent/codehinter/corpus"); }) == "layout");
  }

  TEST_CASE("clean signal lines") {
    auto s = spectrum_of({record("t1", Outcome::Fail, {{"a.py", 1}, {"a.py", 3}}),
                          record("t2", Outcome::Fail, {{"a.py", 1}, {"a.py", 3}}),
                          record("t3", Outcome::Pass, {{"a.py", 1}, {"a.py", 2}})});
    auto line = clean_signal_line(s);
    REQUIRE(line.has_value());
    CHECK(*line == SourceLocation{"a.py", 3});

    // Line 2 is uncovered by any passing test too, so the signal is not clean.
    auto muddy = spectrum_of({record("t1", Outcome::Fail, {{"a.py", 1}, {"a.py", 2}, {"a.py", 3}}),
                              record("t2", Outcome::Pass, {{"a.py", 1}})});
    CHECK_FALSE(clean_signal_line(muddy).has_value());

    auto partial = spectrum_of({record("t1", Outcome::Fail, {{"a.py", 3}}), record("t2", Outcome::Fail, {{"a.py", 1}}),
                                record("t3", Outcome::Pass, {{"a.py", 1}})});
    CHECK_FALSE(clean_signal_line(partial).has_value());
    CHECK_FALSE(clean_signal_line(spectrum_of({record("t1", Outcome::Pass, {{"a.py", 1}})})).has_value());
  }
}
