// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "codehinter/error.hpp"
#include "codehinter/spectrum.hpp"
#include "formula_cases.hpp"
#include "support.hpp"

using namespace codehinter;
using namespace codehinter::testing;
using spectrum::ElementCounts;
using spectrum::Formula;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("hand-computed scores for every formula") {
    CHECK(std::size(kFormulaCases) >= 20);
    for (const auto& c : kFormulaCases) {
      for (Formula f : kAllFormulas) {
        CAPTURE(c.counts.ef);
        CAPTURE(c.counts.ep);
        CAPTURE(c.counts.nf);
        CAPTURE(c.counts.np);
        CAPTURE(spectrum::formula_name(f));
        double want = expected_score(c, f);
        double got = spectrum::score(c.counts, f);
        if (std::isinf(want)) {
          CHECK(std::isinf(got));
          CHECK(got > 0);
        } else {
          CHECK(std::abs(got - want) <= kFormulaTolerance);
        }
      }
    }
  }

  TEST_CASE("formula names round-trip and unknown names are rejected") {
    for (Formula f : kAllFormulas) CHECK(spectrum::parse_formula(spectrum::formula_name(f)) == f);
    CHECK(spectrum::parse_formula("ochiai") == Formula::Ochiai);
    CHECK(code_of([] { spectrum::parse_formula("jaccard"); }) == ErrorCode::UnknownFormula);
    CHECK(spectrum::kDefaultFormula == Formula::Ochiai);
    CHECK(spectrum::kDefaultTopK == 3);
  }

  TEST_CASE("derive_counts partitions tests four ways") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.records = {record("f1", Outcome::Fail, {{"a.py", 3}}), record("f2", Outcome::Error, {{"a.py", 3}}),
                 record("p1", Outcome::Pass, {{"a.py", 3}, {"a.py", 5}})};
    auto counts = spectrum::derive_counts(s);
    REQUIRE(counts.size() == 2);
    CHECK(counts.at({"a.py", 3}) == ElementCounts{2, 1, 0, 0});
    CHECK(counts.at({"a.py", 5}) == ElementCounts{0, 1, 2, 0});
    CHECK_FALSE(counts.contains({"a.py", 4}));
  }

  TEST_CASE("derive_counts with one passing test") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.records = {record("p", Outcome::Pass, {{"a.py", 1}})};
    CHECK(spectrum::derive_counts(s).at({"a.py", 1}) == ElementCounts{0, 1, 0, 0});
  }

  TEST_CASE("derive_counts errors") {
    CoverageSpectrum empty;
    CHECK(code_of([&] { spectrum::derive_counts(empty); }) == ErrorCode::EmptySpectrum);
    CoverageSpectrum bad;
    bad.records = {record("t", Outcome::Fail, {{"../a.py", 1}})};
    CHECK(code_of([&] { spectrum::derive_counts(bad); }) == ErrorCode::MalformedLocation);
    bad.records = {record("t", Outcome::Fail, {{"a.py", 0}})};
    CHECK(code_of([&] { spectrum::derive_counts(bad); }) == ErrorCode::MalformedLocation);
  }

  TEST_CASE("clean signal ranks the buggy line first") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    std::vector<SourceLocation> others = {{"a.py", 1}, {"a.py", 2}, {"a.py", 4}};
    for (int i = 0; i < 2; ++i) {
      auto cov = others;
      cov.push_back({"a.py", 3});
      s.records.push_back(record("f" + std::to_string(i), Outcome::Fail, cov));
    }
    for (int i = 0; i < 3; ++i) s.records.push_back(record("p" + std::to_string(i), Outcome::Pass, others));
    for (Formula f : {Formula::Ochiai, Formula::DStar2, Formula::Op2}) {
      auto r = spectrum::rank(s, f);
      REQUIRE(r.entries.size() == 4);
      CHECK(r.entries[0].location == SourceLocation{"a.py", 3});
      CHECK(r.entries[0].score > r.entries[1].score);
    }
  }

  TEST_CASE("DStar2 sentinel is finite and above every other score") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.records = {record("f1", Outcome::Fail, {{"a.py", 1}, {"a.py", 2}}), record("f2", Outcome::Fail, {{"a.py", 1}}),
                 record("p1", Outcome::Pass, {{"a.py", 2}, {"a.py", 3}})};
    auto r = spectrum::rank(s, Formula::DStar2);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].location == SourceLocation{"a.py", 1});
    // a.py:2 scores 1 / (1 + 1) = 0.5; the sentinel is 0.5 + 1.
    CHECK(r.entries[0].score == doctest::Approx(1.5));
    for (const auto& e : r.entries) CHECK(std::isfinite(e.score));
    CHECK(spectrum::to_json(r).dump().find("inf") == std::string::npos);
  }

  TEST_CASE("ties are ordered by file then line") {
    CoverageSpectrum s;
    s.subject_files = {"a.py", "b.py"};
    s.records = {record("f", Outcome::Fail, {{"b.py", 1}, {"a.py", 9}, {"a.py", 2}})};
    auto r = spectrum::rank(s);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].location == SourceLocation{"a.py", 2});
    CHECK(r.entries[1].location == SourceLocation{"a.py", 9});
    CHECK(r.entries[2].location == SourceLocation{"b.py", 1});
  }

  TEST_CASE("rank of an all-green suite fails") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    s.records = {record("p", Outcome::Pass, {{"a.py", 1}})};
    CHECK(code_of([&] { spectrum::rank(s); }) == ErrorCode::NoFailingTests);
  }

  TEST_CASE("top_k keeps up to k entries") {
    CoverageSpectrum s;
    s.subject_files = {"a.py"};
    std::vector<SourceLocation> seven;
    for (int l = 1; l <= 7; ++l) seven.push_back({"a.py", l});
    s.records = {record("f", Outcome::Fail, seven)};
    auto r = spectrum::rank(s);
    auto top = spectrum::top_k(r);
    REQUIRE(top.size() == 3);
    CHECK(std::equal(top.begin(), top.end(), r.entries.begin()));
    CHECK(spectrum::top_k(r, 1).size() == 1);
    CHECK(spectrum::top_k(r, 1)[0] == r.entries[0]);

    s.records = {record("f", Outcome::Fail, {{"a.py", 1}, {"a.py", 2}})};
    CHECK(spectrum::top_k(spectrum::rank(s), 3).size() == 2);
  }

  TEST_CASE("property: rank agrees with a brute-force oracle") {
    std::mt19937_64 rng(1234);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      auto s = random_spectrum(rng);
      bool any_failing = std::any_of(s.records.begin(), s.records.end(), [](auto& r) { return r.failing(); });
      if (!any_failing) continue;
      for (Formula f : kAllFormulas) {
        auto got = spectrum::rank(s, f);
        auto want = oracle_rank(s, f);
        REQUIRE(got.entries.size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k) {
          CHECK(got.entries[k].location == want[k].location);
          CHECK(std::abs(got.entries[k].score - want[k].score) <= 1e-12);
        }
      }
      ++checked;
    }
    CHECK(checked > 100);
  }

  TEST_CASE("property: shuffling tests never changes the ranking") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      auto s = random_spectrum(rng);
      if (std::none_of(s.records.begin(), s.records.end(), [](auto& r) { return r.failing(); })) continue;
      auto shuffled = s;
      std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
      for (Formula f : kAllFormulas) CHECK(spectrum::rank(s, f) == spectrum::rank(shuffled, f));
    }
  }

  TEST_CASE("property: scores are monotone in ef") {
    for (Formula f : kAllFormulas) {
      for (long ep = 0; ep <= 4; ++ep) {
        for (long nf = 0; nf <= 4; ++nf) {
          for (long np = 0; np <= 4; ++np) {
            double prev = -1e300;
            for (long ef = 0; ef <= 6; ++ef) {
              double s = spectrum::score({ef, ep, nf, np}, f);
              CHECK(s >= prev);
              prev = s;
            }
          }
        }
      }
    }
  }

  TEST_CASE("property: serialized rankings are deterministic") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      auto s = random_spectrum(rng);
      if (std::none_of(s.records.begin(), s.records.end(), [](auto& r) { return r.failing(); })) continue;
      CHECK(spectrum::to_json(spectrum::rank(s)).dump() == spectrum::to_json(spectrum::rank(s)).dump());
    }
  }

  TEST_CASE("property: the clean-signal line tops Ochiai, DStar2 and Op2") {
    std::mt19937_64 rng(4242);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
      int lines = std::uniform_int_distribution<int>(2, 8)(rng);
      int bug = std::uniform_int_distribution<int>(1, lines)(rng);
      int failing = std::uniform_int_distribution<int>(1, 3)(rng);
      int passing = std::uniform_int_distribution<int>(1, 4)(rng);
      CoverageSpectrum s;
      s.subject_files = {"a.py"};
      std::vector<std::vector<SourceLocation>> pass_cov(static_cast<std::size_t>(passing));
      for (int l = 1; l <= lines; ++l) {
        if (l == bug) continue;
        // Every other line is covered by at least one passing test.
        pass_cov[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, passing - 1)(rng))].push_back({"a.py", l});
      }
      for (int p = 0; p < passing; ++p) s.records.push_back(record("p" + std::to_string(p), Outcome::Pass, pass_cov[static_cast<std::size_t>(p)]));
      for (int t = 0; t < failing; ++t) {
        std::vector<SourceLocation> cov{{"a.py", bug}};
        for (int l = 1; l <= lines; ++l) {
          if (l != bug && std::uniform_int_distribution<int>(0, 1)(rng)) cov.push_back({"a.py", l});
        }
        s.records.push_back(record("f" + std::to_string(t), Outcome::Fail, cov));
      }
      for (Formula f : {Formula::Ochiai, Formula::DStar2, Formula::Op2}) {
        auto r = spectrum::rank(s, f);
        CHECK(r.entries[0].location == SourceLocation{"a.py", bug});
        if (r.entries.size() > 1) CHECK(r.entries[0].score > r.entries[1].score);
      }
      ++checked;
    }
    CHECK(checked == 300);
  }
}
