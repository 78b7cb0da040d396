// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/pyscan.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace codehinter::pyscan {

namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",   "True",    "and",      "as",       "assert", "async",  "await",    "break",
    "class",  "continue", "def",   "del",      "elif",     "else",   "except", "finally",  "for",
    "from",   "global", "if",      "import",   "in",       "is",     "lambda", "nonlocal", "not",
    "or",     "pass",   "raise",   "return",   "try",      "while",  "with",   "yield"};

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize_line(std::string_view line) {
  static const std::array<std::string_view, 20> kOps = {"**=", "//=", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=",
                                                        "%=",  "//",  "**", "->", ":=", "<<", ">>", "&=", "|=", "^="};
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (c == '#') {
      out.push_back({TokKind::Comment, std::string(line.substr(i)), i});
      break;
    } else if (c == '"' || c == '\'' ||
               ((c == 'f' || c == 'r' || c == 'b' || c == 'F' || c == 'R' || c == 'B') && i + 1 < line.size() &&
                (line[i + 1] == '"' || line[i + 1] == '\''))) {
      std::size_t start = i;
      if (c != '"' && c != '\'') ++i;
      char q = line[i];
      bool triple = line.substr(i, 3) == std::string(3, q);
      i += triple ? 3 : 1;
      while (i < line.size()) {
        if (line[i] == '\\') {
          i += 2;
          continue;
        }
        if (triple ? line.substr(i, 3) == std::string(3, q) : line[i] == q) {
          i += triple ? 3 : 1;
          break;
        }
        ++i;
      }
      i = std::min(i, line.size());
      out.push_back({TokKind::String, std::string(line.substr(start, i - start)), start});
    } else if (is_name_start(c)) {
      std::size_t start = i;
      while (i < line.size() && is_name_char(line[i])) ++i;
      out.push_back({TokKind::Name, std::string(line.substr(start, i - start)), start});
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      std::size_t start = i;
      while (i < line.size() && (is_name_char(line[i]) || line[i] == '.')) ++i;
      out.push_back({TokKind::Number, std::string(line.substr(start, i - start)), start});
    } else {
      std::size_t start = i;
      std::string_view op = line.substr(i, 1);
      for (auto candidate : kOps) {
        if (line.substr(i, candidate.size()) == candidate) {
          op = candidate;
          break;
        }
      }
      i += op.size();
      out.push_back({TokKind::Op, std::string(op), start});
    }
  }
  return out;
}

std::string indent_of(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
  return std::string(line.substr(0, n));
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

bool is_blank_or_comment(std::string_view line) {
  auto t = trim(line);
  return t.empty() || t.front() == '#';
}

int bracket_delta(std::string_view line) {
  int depth = 0;
  for (const auto& t : tokenize_line(line)) {
    if (t.kind != TokKind::Op) continue;
    if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
    if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
  }
  return depth;
}

std::string code_part(std::string_view line) {
  auto tokens = tokenize_line(line);
  std::size_t end = line.size();
  if (!tokens.empty() && tokens.back().kind == TokKind::Comment) end = tokens.back().pos;
  std::string_view code = line.substr(0, end);
  while (!code.empty() && std::isspace(static_cast<unsigned char>(code.back()))) code.remove_suffix(1);
  return std::string(code);
}

std::string leading_keyword(std::string_view line) {
  auto tokens = tokenize_line(line);
  if (!tokens.empty() && tokens[0].kind == TokKind::Name && is_keyword(tokens[0].text)) return tokens[0].text;
  return "";
}

std::vector<std::string> assigned_names(std::string_view line) {
  auto tokens = tokenize_line(line);
  std::vector<std::string> names;
  auto add = [&](const std::string& n) {
    if (!is_keyword(n) && std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  };
  if (tokens.empty()) return names;
  if (tokens[0].kind == TokKind::Name && tokens[0].text == "for") {
    for (std::size_t i = 1; i < tokens.size() && tokens[i].text != "in"; ++i) {
      if (tokens[i].kind == TokKind::Name) add(tokens[i].text);
    }
    return names;
  }
  if (tokens[0].kind == TokKind::Name && is_keyword(tokens[0].text)) return names;

  // Find a top-level assignment operator.
  int depth = 0;
  std::size_t assign_at = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokKind::Op) continue;
    if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
    if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
    bool is_assign = t.text == "=" || (t.text.size() >= 2 && t.text.back() == '=' && t.text != "==" &&
                                       t.text != "!=" && t.text != "<=" && t.text != ">=");
    if (depth == 0 && is_assign) {
      assign_at = i;
      break;
    }
  }
  if (assign_at == tokens.size()) return names;
  // Targets: names at bracket depth 0 not preceded by '.'.
  depth = 0;
  for (std::size_t i = 0; i < assign_at; ++i) {
    const auto& t = tokens[i];
    if (t.kind == TokKind::Op) {
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
      continue;
    }
    bool after_dot = i > 0 && tokens[i - 1].text == ".";
    if (t.kind == TokKind::Name && depth == 0 && !after_dot) add(t.text);
  }
  return names;
}

std::vector<std::string> referenced_names(std::string_view line) {
  auto tokens = tokenize_line(line);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokKind::Name || is_keyword(t.text)) continue;
    bool after_dot = i > 0 && tokens[i - 1].text == ".";
    bool called = i + 1 < tokens.size() && tokens[i + 1].text == "(";
    bool kwarg = i + 1 < tokens.size() && tokens[i + 1].text == "=" && i > 0 &&
                 (tokens[i - 1].text == "(" || tokens[i - 1].text == ",");
    bool def_name = i > 0 && tokens[i - 1].text == "def";
    if (after_dot || called || kwarg || def_name) continue;
    if (std::find(names.begin(), names.end(), t.text) == names.end()) names.push_back(t.text);
  }
  return names;
}

}  // namespace codehinter::pyscan
