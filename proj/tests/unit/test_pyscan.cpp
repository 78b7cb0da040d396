// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "codehinter/pyscan.hpp"

using namespace codehinter::pyscan;
using Names = std::vector<std::string>;

TEST_SUITE("pyscan") {
  TEST_CASE("tokens keep strings and comments whole") {
    auto t = tokenize_line("x = 'a # b' + y  # note");
    REQUIRE(t.size() == 6);
    CHECK(t[0].kind == TokKind::Name);
    CHECK(t[2].kind == TokKind::String);
    CHECK(t[2].text == "'a # b'");
    CHECK(t[4].text == "y");
    CHECK(t[5].kind == TokKind::Comment);
    CHECK(tokenize_line("a <= b")[1].text == "<=");
    CHECK(tokenize_line("a //= 2")[1].text == "//=");
    CHECK(tokenize_line("x = 1.5e3")[2].kind == TokKind::Number);
  }

  TEST_CASE("line helpers") {
    CHECK(indent_of("    x = 1") == "    ");
    CHECK(trim("  a b \t") == "a b");
    CHECK(is_blank_or_comment("   # only"));
    CHECK(is_blank_or_comment(""));
    CHECK_FALSE(is_blank_or_comment("x"));
    CHECK(bracket_delta("f(a, [b") == 2);
    CHECK(bracket_delta("s = ')'") == 0);
    CHECK(code_part("x = 1  # set x") == "x = 1");
    CHECK(code_part("s = '#'") == "s = '#'");
    CHECK(leading_keyword("    for i in x:") == "for");
    CHECK(leading_keyword("total = 0") == "");
    CHECK(is_keyword("while"));
    CHECK_FALSE(is_keyword("print"));
  }

  TEST_CASE("assigned names") {
    CHECK(assigned_names("x = 1") == Names{"x"});
    CHECK(assigned_names("a, b = b, a") == Names{"a", "b"});
    CHECK(assigned_names("    total += n") == Names{"total"});
    CHECK(assigned_names("nums[i] = 0") == Names{"nums"});
    CHECK(assigned_names("for i in range(n):") == Names{"i"});
    CHECK(assigned_names("if a == b:").empty());
    CHECK(assigned_names("f(x=1)").empty());
  }

  TEST_CASE("referenced names skip calls, attributes and keywords") {
    CHECK(referenced_names("while left < right and s[left] == s[right]:") == Names{"left", "right", "s"});
    CHECK(referenced_names("result.append(total)") == Names{"result", "total"});
    CHECK(referenced_names("print(x, sep=y)") == Names{"x", "y"});
    CHECK(referenced_names("return len(nums) - 1") == Names{"nums"});
  }
}
