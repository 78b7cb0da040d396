// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Line-level lexical helpers for Python source. Best effort by design: each
// line is scanned on its own and an unterminated string runs to the end of
// the line.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace codehinter::pyscan {

enum class TokKind { Name, Number, String, Op, Comment };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t pos = 0;  // byte offset in the line
};

std::vector<Token> tokenize_line(std::string_view line);

bool is_keyword(std::string_view word);
std::string indent_of(std::string_view line);
std::string_view trim(std::string_view text);
bool is_blank_or_comment(std::string_view line);

/// Opening minus closing brackets outside strings and comments.
int bracket_delta(std::string_view line);

/// The line without its trailing comment and whitespace.
std::string code_part(std::string_view line);

/// Names bound by the statement on this line: `a = ...`, `a, b = ...`,
/// `a += ...`, `a[i] = ...` (binds a), `for x in ...`.
std::vector<std::string> assigned_names(std::string_view line);

/// Variables read on the line, in order of first appearance. Excludes
/// keywords, called names, attribute names and keyword-argument names.
std::vector<std::string> referenced_names(std::string_view line);

/// First token if it is a keyword, else "".
std::string leading_keyword(std::string_view line);

}  // namespace codehinter::pyscan
