// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/mutation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "codehinter/pyscan.hpp"

namespace codehinter::mutation {

using pyscan::Token;
using pyscan::TokKind;

namespace {

class Collector {
 public:
  explicit Collector(std::string_view original) : original_(original) {}

  void add(std::string text, std::string family, std::string description) {
    if (text == original_ || !seen_.insert(text).second) return;
    out_.push_back({std::move(text), std::move(family), std::move(description)});
  }
  std::vector<Mutant> take() { return std::move(out_); }

 private:
  std::string original_;
  std::set<std::string> seen_;
  std::vector<Mutant> out_;
};

std::string splice(std::string_view line, std::size_t pos, std::size_t len, std::string_view with) {
  std::string out(line.substr(0, pos));
  out += with;
  out += line.substr(pos + len);
  return out;
}

bool ends_operand(const Token& t) {
  return t.kind == TokKind::Name || t.kind == TokKind::Number || t.kind == TokKind::String || t.text == ")" ||
         t.text == "]";
}

bool is_int_literal(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
         (s.size() == 1 || s[0] != '0');
}

std::string quoted(std::string_view s) { return "`" + std::string(s) + "`"; }

// Index of the bracket closing the one at `open`, or npos.
std::size_t matching(const std::vector<Token>& tokens, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokKind::Op) continue;
    const auto& t = tokens[i].text;
    if (t == "(" || t == "[" || t == "{") ++depth;
    if (t == ")" || t == "]" || t == "}") {
      if (--depth == 0) return i;
    }
  }
  return std::string::npos;
}

}  // namespace

std::vector<Mutant> mutate_line(std::string_view line) {
  Collector out(line);
  auto tokens = pyscan::tokenize_line(line);

  static const std::map<std::string, std::vector<std::string>> kComparisons = {
      {"<", {"<=", ">"}}, {"<=", {"<", ">="}}, {">", {">=", "<"}},
      {">=", {">", "<="}}, {"==", {"!="}},     {"!=", {"=="}}};
  for (const auto& t : tokens) {
    if (t.kind != TokKind::Op) continue;
    auto it = kComparisons.find(t.text);
    if (it == kComparisons.end()) continue;
    for (const auto& to : it->second) {
      out.add(splice(line, t.pos, t.text.size(), to), "comparison",
              "change " + quoted(t.text) + " to " + quoted(to));
    }
  }

  static const std::map<std::string, std::string> kOperators = {
      {"+", "-"}, {"-", "+"}, {"+=", "-="}, {"-=", "+="}, {"*", "+"}, {"//", "%"}, {"%", "//"}};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokKind::Op) continue;
    auto it = kOperators.find(t.text);
    if (it == kOperators.end()) continue;
    bool binary = i > 0 && ends_operand(tokens[i - 1]);
    if ((t.text == "+" || t.text == "-" || t.text == "*") && !binary) continue;
    out.add(splice(line, t.pos, t.text.size(), it->second), "operator",
            "change " + quoted(t.text) + " to " + quoted(it->second));
  }

  static const std::map<std::string, std::string> kBooleans = {
      {"and", "or"}, {"or", "and"}, {"True", "False"}, {"False", "True"}};
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokKind::Name) continue;
    if (auto it = kBooleans.find(t.text); it != kBooleans.end()) {
      out.add(splice(line, t.pos, t.text.size(), it->second), "boolean",
              "change " + quoted(t.text) + " to " + quoted(it->second));
    }
    if (t.text == "not" && i + 1 < tokens.size() && tokens[i + 1].text != "in") {
      out.add(splice(line, t.pos, tokens[i + 1].pos - t.pos, ""), "boolean", "remove " + quoted("not"));
    }
  }

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.kind != TokKind::Number || !is_int_literal(t.text)) continue;
    long long v = std::stoll(t.text);
    bool negated = i > 0 && tokens[i - 1].text == "-" && !ends_operand(i > 1 ? tokens[i - 2] : Token{TokKind::Op, "(", 0});
    out.add(splice(line, t.pos, t.text.size(), std::to_string(v + 1)), "off-by-one",
            "change " + quoted(t.text) + " to " + quoted(std::to_string(v + 1)));
    if (v > 0 && !(negated && v == 1)) {
      out.add(splice(line, t.pos, t.text.size(), std::to_string(v - 1)), "off-by-one",
              "change " + quoted(t.text) + " to " + quoted(std::to_string(v - 1)));
    }
  }

  for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
    // name[index] with a single-name index
    if (tokens[i].text == "[" && i > 0 && ends_operand(tokens[i - 1]) && tokens[i + 1].kind == TokKind::Name &&
        !pyscan::is_keyword(tokens[i + 1].text) && tokens[i + 2].text == "]") {
      const auto& idx = tokens[i + 1];
      for (const char* delta : {" + 1", " - 1"}) {
        std::string to = idx.text + delta;
        out.add(splice(line, idx.pos, idx.text.size(), to), "index",
                "change index " + quoted(idx.text) + " to " + quoted(to));
      }
    }
  }
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].text != "range" || tokens[i + 1].text != "(") continue;
    std::size_t close = matching(tokens, i + 1);
    if (close == std::string::npos || close == i + 2) continue;
    for (const char* delta : {" + 1", " - 1"}) {
      std::string before(line.substr(tokens[i].pos, tokens[close].pos - tokens[i].pos));
      out.add(splice(line, tokens[close].pos, 0, delta), "index",
              "change " + quoted(before + ")") + " to " + quoted(before + delta + ")"));
    }
  }
  return out.take();
}

std::vector<Mutant> repair_line(std::string_view line) {
  Collector out(line);
  std::string code = pyscan::code_part(line);
  std::string rest(line.substr(code.size()));
  auto tokens = pyscan::tokenize_line(code);
  std::string kw = pyscan::leading_keyword(code);
  static const std::set<std::string> kCompound = {"if",  "elif",   "else",    "for",  "while", "def",
                                                  "try", "except", "finally", "with", "class"};

  // Unclosed brackets, innermost last.
  std::vector<std::string> open;
  std::vector<std::size_t> stray;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i].text;
    if (tokens[i].kind != TokKind::Op) continue;
    if (t == "(" || t == "[" || t == "{") open.push_back(t);
    if (t == ")" || t == "]" || t == "}") {
      if (open.empty()) stray.push_back(i);
      else open.pop_back();
    }
  }
  static const std::map<std::string, std::string> kCloser = {{"(", ")"}, {"[", "]"}, {"{", "}"}};
  bool has_colon = !code.empty() && code.back() == ':';
  std::string body = has_colon ? code.substr(0, code.size() - 1) : code;

  if (!open.empty()) {
    std::string closers;
    for (auto it = open.rbegin(); it != open.rend(); ++it) closers += kCloser.at(*it);
    std::string fixed = body + closers + (has_colon || kCompound.contains(kw) ? ":" : "");
    out.add(fixed + rest, "syntax", "close the open " + quoted(open.back()));
  }
  if (kCompound.contains(kw) && !has_colon) out.add(code + ":" + rest, "syntax", "add the missing " + quoted(":"));
  for (auto i : stray) {
    out.add(splice(line, tokens[i].pos, 1, ""), "syntax", "remove the extra " + quoted(tokens[i].text));
  }
  if (kw == "if" || kw == "elif" || kw == "while") {
    for (const auto& t : tokens) {
      if (t.kind == TokKind::Op && t.text == "=") out.add(splice(line, t.pos, 1, "=="), "syntax", "use `==` to compare");
    }
  }
  // Plausible alternatives that keep the structure recognisable.
  out.add(body + ")" + (has_colon ? ":" : "") + rest, "syntax", "add a " + quoted(")"));
  if (!has_colon) out.add(code + ":" + rest, "syntax", "add a " + quoted(":"));
  if (has_colon) out.add(body + rest, "syntax", "remove the " + quoted(":"));
  for (std::size_t i = tokens.size(); i-- > 0;) {
    if (tokens[i].kind == TokKind::Op && (tokens[i].text == ")" || tokens[i].text == "]")) {
      out.add(splice(line, tokens[i].pos, 1, ""), "syntax", "remove the last " + quoted(tokens[i].text));
      break;
    }
  }
  return out.take();
}

}  // namespace codehinter::mutation
