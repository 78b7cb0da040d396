// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <set>

#include <doctest.h>

#include "codehinter/mutation.hpp"

using namespace codehinter::mutation;

namespace {

bool has(const std::vector<Mutant>& ms, const std::string& text) {
  return std::any_of(ms.begin(), ms.end(), [&](const Mutant& m) { return m.text == text; });
}

}  // namespace

TEST_SUITE("mutation") {
  TEST_CASE("comparison flips") {
    auto ms = mutate_line("    while i <= n:");
    CHECK(has(ms, "    while i < n:"));
    CHECK(has(ms, "    while i >= n:"));
    CHECK(ms.front().family == "comparison");
    CHECK(ms.front().description == "change `<=` to `<`");
  }

  TEST_CASE("operators, booleans and literals") {
    CHECK(has(mutate_line("x = a + b"), "x = a - b"));
    CHECK_FALSE(has(mutate_line("x = -b"), "x = +b"));
    CHECK(has(mutate_line("total += n"), "total -= n"));
    CHECK(has(mutate_line("k = k % n"), "k = k // n"));
    CHECK(has(mutate_line("if a and b:"), "if a or b:"));
    CHECK(has(mutate_line("if not done:"), "if done:"));
    CHECK(has(mutate_line("found = True"), "found = False"));
    auto lit = mutate_line("i = 1");
    CHECK(has(lit, "i = 2"));
    CHECK(has(lit, "i = 0"));
    CHECK_FALSE(has(mutate_line("i = 0"), "i = -1"));
  }

  TEST_CASE("index and range boundaries") {
    auto ms = mutate_line("    return nums[i]");
    CHECK(has(ms, "    return nums[i + 1]"));
    CHECK(has(ms, "    return nums[i - 1]"));
    auto r = mutate_line("for i in range(1, n):");
    CHECK(has(r, "for i in range(1, n + 1):"));
    CHECK(has(r, "for i in range(1, n - 1):"));
  }

  TEST_CASE("strings and comments are never touched") {
    for (const auto& m : mutate_line("s = 'a < b'  # x + 1")) {
      CHECK(m.text.find("'a < b'") != std::string::npos);
      CHECK(m.text.find("# x + 1") != std::string::npos);
    }
    CHECK(mutate_line("s = 'a < b'").empty());
  }

  TEST_CASE("mutants are distinct and differ from the original") {
    for (const char* line : {"if a[i] < b[j] and i + 1 < n:", "x = y", "return (lo + hi) // 2"}) {
      auto ms = mutate_line(line);
      std::set<std::string> texts;
      for (const auto& m : ms) {
        CHECK(m.text != line);
        CHECK(texts.insert(m.text).second);
        CHECK_FALSE(m.description.empty());
      }
    }
  }

  TEST_CASE("syntax repairs") {
    auto colon = repair_line("    for ch in text");
    CHECK(has(colon, "    for ch in text:"));
    auto paren = repair_line("    ranges.append(str(start)");
    CHECK(has(paren, "    ranges.append(str(start))"));
    auto stray = repair_line("x = f(a))");
    CHECK(has(stray, "x = f(a)"));
    auto eq = repair_line("if x = 1:");
    CHECK(has(eq, "if x == 1:"));
    for (const auto& m : colon) CHECK(m.family == "syntax");
  }
}
