// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <optional>
#include <set>
#include <string_view>

#include "ast.hpp"

namespace minipy {
namespace {

enum class Tok { Name, Int, Float, Str, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind;
  std::string text;
  int line = 0;
  bool fstring = false;
  std::int64_t int_value = 0;
  double float_value = 0.0;
};

const std::set<std::string, std::less<>> kKeywords = {
    "False", "None",   "True",  "and",      "as",     "assert", "break",
    "class", "continue", "def", "del",      "elif",   "else",   "except",
    "finally", "for",  "from",  "global",   "if",     "import", "in",
    "is",    "lambda", "nonlocal", "not",   "or",     "pass",   "raise",
    "return", "try",   "while", "with",     "yield"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_ && brackets_.empty()) {
        if (!handle_indentation()) break;
        continue;
      }
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n') {
        pos_ += 2;
        ++line_;
      } else if (c == '\n') {
        if (brackets_.empty()) {
          emit(Tok::Newline, "");
          at_line_start_ = true;
        }
        ++pos_;
        ++line_;
      } else if (is_ident_start(c)) {
        lex_name_or_prefixed_string();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
      } else if (c == '"' || c == '\'') {
        lex_string(false, false);
      } else {
        lex_operator();
      }
    }
    if (!brackets_.empty()) {
      throw SyntaxError(brackets_.back().second,
                        std::string("'") + brackets_.back().first + "' was never closed");
    }
    if (!out_.empty() && out_.back().kind != Tok::Newline && out_.back().kind != Tok::Dedent) {
      emit(Tok::Newline, "");
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(Tok::Dedent, "");
    }
    emit(Tok::End, "");
    return std::move(out_);
  }

 private:
  void emit(Tok kind, std::string text) { out_.push_back(Token{kind, std::move(text), line_}); }

  // Returns false at end of input.
  bool handle_indentation() {
    int col = 0;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
      col = src_[pos_] == '\t' ? (col / 8 + 1) * 8 : col + 1;
      ++pos_;
    }
    if (pos_ >= src_.size()) return false;
    char c = src_[pos_];
    if (c == '\n' || c == '\r' || c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      if (pos_ < src_.size()) {
        ++pos_;
        ++line_;
      }
      return true;
    }
    if (col > indents_.back()) {
      indents_.push_back(col);
      emit(Tok::Indent, "");
    } else {
      while (col < indents_.back()) {
        indents_.pop_back();
        emit(Tok::Dedent, "");
      }
      if (col != indents_.back()) {
        throw SyntaxError(line_, "unindent does not match any outer indentation level");
      }
    }
    at_line_start_ = false;
    return true;
  }

  void lex_name_or_prefixed_string() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    std::string word(src_.substr(start, pos_ - start));
    if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') && word.size() <= 2) {
      bool f = false, r = false, ok = true;
      for (char ch : word) {
        char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (lower == 'f') f = true;
        else if (lower == 'r') r = true;
        else if (lower != 'b' && lower != 'u') ok = false;
      }
      if (ok) {
        lex_string(f, r);
        return;
      }
    }
    emit(Tok::Name, std::move(word));
  }

  void lex_number() {
    std::size_t start = pos_;
    bool is_float = false;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_float = true;
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        is_float = true;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    if (pos_ < src_.size() && is_ident_start(src_[pos_])) {
      throw SyntaxError(line_, "invalid decimal literal");
    }
    std::string text;
    for (char ch : src_.substr(start, pos_ - start)) {
      if (ch != '_') text.push_back(ch);
    }
    Token t{is_float ? Tok::Float : Tok::Int, text, line_};
    if (is_float) {
      t.float_value = std::strtod(text.c_str(), nullptr);
    } else {
      errno = 0;
      t.int_value = std::strtoll(text.c_str(), nullptr, 10);
      if (errno == ERANGE) throw SyntaxError(line_, "integer literal too large");
    }
    out_.push_back(std::move(t));
  }

  void lex_string(bool fstring, bool raw) {
    int start_line = line_;
    char quote = src_[pos_];
    bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote;
    pos_ += triple ? 3 : 1;
    std::string value;
    for (;;) {
      if (pos_ >= src_.size()) {
        throw SyntaxError(start_line, triple ? "unterminated triple-quoted string literal"
                                             : "unterminated string literal");
      }
      char c = src_[pos_];
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote && src_[pos_ + 2] == quote) {
          pos_ += 3;
          break;
        }
      }
      if (c == '\n') {
        if (!triple) throw SyntaxError(start_line, "unterminated string literal");
        ++line_;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char n = src_[pos_ + 1];
        if (raw) {
          value.push_back(c);
          value.push_back(n);
        } else {
          switch (n) {
            case 'n': value.push_back('\n'); break;
            case 't': value.push_back('\t'); break;
            case 'r': value.push_back('\r'); break;
            case '0': value.push_back('\0'); break;
            case '\\': value.push_back('\\'); break;
            case '\'': value.push_back('\''); break;
            case '"': value.push_back('"'); break;
            case '\n': ++line_; break;
            default:
              value.push_back('\\');
              value.push_back(n);
          }
        }
        pos_ += 2;
        continue;
      }
      value.push_back(c);
      ++pos_;
    }
    Token t{Tok::Str, std::move(value), start_line};
    t.fstring = fstring;
    out_.push_back(std::move(t));
  }

  void lex_operator() {
    static const char* kThree[] = {"**=", "//=", "..."};
    static const char* kTwo[] = {"**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=",
                                 "/=", "%=", "->", "<<", ">>", "&=", "|=", "^="};
    std::string_view rest = src_.substr(pos_);
    for (const char* op : kThree) {
      if (rest.starts_with(op)) {
        emit(Tok::Op, op);
        pos_ += 3;
        return;
      }
    }
    for (const char* op : kTwo) {
      if (rest.starts_with(op)) {
        emit(Tok::Op, op);
        pos_ += 2;
        return;
      }
    }
    char c = src_[pos_];
    static const std::string_view kSingle = "+-*/%<>=()[]{},:.;@|&^~";
    if (kSingle.find(c) == std::string_view::npos) {
      throw SyntaxError(line_, std::string("invalid character '") + c + "'");
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.emplace_back(c, line_);
    } else if (c == ')' || c == ']' || c == '}') {
      char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty()) {
        throw SyntaxError(line_, std::string("unmatched '") + c + "'");
      }
      if (brackets_.back().first != open) {
        throw SyntaxError(line_, std::string("closing parenthesis '") + c +
                                     "' does not match opening parenthesis '" +
                                     brackets_.back().first + "'");
      }
      brackets_.pop_back();
    }
    emit(Tok::Op, std::string(1, c));
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  bool at_line_start_ = true;
  std::vector<int> indents_{0};
  std::vector<std::pair<char, int>> brackets_;
  std::vector<Token> out_;
};

ExprPtr make_expr(ExprKind kind, int line) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->line = line;
  return e;
}

StmtPtr make_stmt(StmtKind kind, int line) {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->line = line;
  return s;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int line_offset = 0)
      : toks_(std::move(toks)), line_offset_(line_offset) {}

  Block parse_file() {
    Block body;
    while (!at(Tok::End)) {
      if (at(Tok::Newline)) {
        ++i_;
        continue;
      }
      parse_statement(body);
    }
    return body;
  }

  ExprPtr parse_standalone_expression() {
    auto e = parse_test();
    while (at(Tok::Newline)) ++i_;
    if (!at(Tok::End)) fail("invalid syntax in f-string expression");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = std::min(i_ + ahead, toks_.size() - 1);
    return toks_[idx];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_op(std::string_view op) const { return peek().kind == Tok::Op && peek().text == op; }
  bool at_kw(std::string_view kw) const { return peek().kind == Tok::Name && peek().text == kw; }
  int line() const { return peek().line + line_offset_; }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(line(), message); }

  void expect_op(std::string_view op) {
    if (!at_op(op)) {
      if (op == ":") fail("expected ':'");
      fail("invalid syntax");
    }
    ++i_;
  }
  bool accept_op(std::string_view op) {
    if (at_op(op)) {
      ++i_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view kw) {
    if (at_kw(kw)) {
      ++i_;
      return true;
    }
    return false;
  }
  std::string expect_name() {
    if (!at(Tok::Name) || kKeywords.contains(peek().text)) fail("invalid syntax");
    return toks_[i_++].text;
  }

  void parse_statement(Block& out) {
    if (at(Tok::Indent)) fail("unexpected indent");
    if (at(Tok::Dedent)) fail("invalid syntax");
    if (at(Tok::Name)) {
      const std::string& w = peek().text;
      if (w == "if") return out.push_back(parse_if(false));
      if (w == "while") return out.push_back(parse_while());
      if (w == "for") return out.push_back(parse_for());
      if (w == "def") return out.push_back(parse_def());
      if (w == "class" || w == "try" || w == "with") fail("'" + w + "' statements are not supported");
      if (w == "elif" || w == "else") fail("invalid syntax");
    }
    parse_simple_statements(out);
  }

  void parse_simple_statements(Block& out) {
    for (;;) {
      out.push_back(parse_small_statement());
      if (!accept_op(";")) break;
      if (at(Tok::Newline)) break;
    }
    if (!at(Tok::Newline)) fail("invalid syntax");
    ++i_;
  }

  Block parse_block(const std::string& owner, int owner_line) {
    expect_op(":");
    Block body;
    if (at(Tok::Newline)) {
      ++i_;
      if (!at(Tok::Indent)) {
        throw SyntaxError(line(), "expected an indented block after '" + owner +
                                      "' statement on line " + std::to_string(owner_line));
      }
      ++i_;
      while (!at(Tok::Dedent) && !at(Tok::End)) {
        if (at(Tok::Newline)) {
          ++i_;
          continue;
        }
        parse_statement(body);
      }
      if (at(Tok::Dedent)) ++i_;
    } else {
      parse_simple_statements(body);
    }
    return body;
  }

  StmtPtr parse_if(bool is_elif) {
    int l = line();
    ++i_;  // if / elif
    auto s = make_stmt(StmtKind::If, l);
    s->is_elif = is_elif;
    s->value = parse_test();
    s->body = parse_block(is_elif ? "elif" : "if", l);
    if (at_kw("elif")) {
      s->orelse.push_back(parse_if(true));
    } else if (at_kw("else")) {
      int el = line();
      ++i_;
      s->orelse = parse_block("else", el);
    }
    return s;
  }

  StmtPtr parse_while() {
    int l = line();
    ++i_;
    auto s = make_stmt(StmtKind::While, l);
    s->value = parse_test();
    s->body = parse_block("while", l);
    if (at_kw("else")) fail("'while ... else' is not supported");
    return s;
  }

  StmtPtr parse_for() {
    int l = line();
    ++i_;
    auto s = make_stmt(StmtKind::For, l);
    s->targets.push_back(parse_target_list());
    if (!accept_kw("in")) fail("invalid syntax");
    s->value = parse_testlist();
    s->body = parse_block("for", l);
    if (at_kw("else")) fail("'for ... else' is not supported");
    return s;
  }

  StmtPtr parse_def() {
    int l = line();
    ++i_;
    auto s = make_stmt(StmtKind::Def, l);
    s->name = expect_name();
    expect_op("(");
    s->params = parse_params(")");
    expect_op(")");
    if (accept_op("->")) parse_test();
    s->body = parse_block("function definition", l);
    return s;
  }

  std::vector<Param> parse_params(std::string_view closer) {
    std::vector<Param> params;
    bool seen_default = false;
    while (!at_op(closer)) {
      Param p;
      p.name = expect_name();
      if (closer == ")" && accept_op(":")) parse_test();  // annotation, ignored
      if (accept_op("=")) {
        p.default_value = parse_test();
        seen_default = true;
      } else if (seen_default) {
        fail("non-default argument follows default argument");
      }
      params.push_back(std::move(p));
      if (!accept_op(",")) break;
    }
    return params;
  }

  StmtPtr parse_small_statement() {
    int l = line();
    if (at(Tok::Name)) {
      const std::string w = peek().text;
      if (w == "pass") {
        ++i_;
        return make_stmt(StmtKind::Pass, l);
      }
      if (w == "break") {
        ++i_;
        return make_stmt(StmtKind::Break, l);
      }
      if (w == "continue") {
        ++i_;
        return make_stmt(StmtKind::Continue, l);
      }
      if (w == "return") {
        ++i_;
        auto s = make_stmt(StmtKind::Return, l);
        if (!at(Tok::Newline) && !at_op(";")) s->value = parse_testlist();
        return s;
      }
      if (w == "assert") {
        ++i_;
        auto s = make_stmt(StmtKind::Assert, l);
        s->value = parse_test();
        if (accept_op(",")) s->message = parse_test();
        return s;
      }
      if (w == "global" || w == "nonlocal") {
        ++i_;
        auto s = make_stmt(StmtKind::Global, l);
        do {
          s->names.push_back(expect_name());
        } while (accept_op(","));
        return s;
      }
      if (w == "del") {
        ++i_;
        auto s = make_stmt(StmtKind::Del, l);
        s->targets.push_back(parse_target_list());
        return s;
      }
      if (w == "import") {
        ++i_;
        auto s = make_stmt(StmtKind::Import, l);
        do {
          std::string name = parse_dotted_name();
          std::string alias = name.substr(0, name.find('.'));
          if (accept_kw("as")) alias = expect_name();
          s->names.push_back(name);
          s->aliases.push_back(alias);
        } while (accept_op(","));
        return s;
      }
      if (w == "from") {
        ++i_;
        auto s = make_stmt(StmtKind::ImportFrom, l);
        s->name = parse_dotted_name();
        if (!accept_kw("import")) fail("invalid syntax");
        bool paren = accept_op("(");
        do {
          if (paren && at_op(")")) break;
          if (at_op("*")) fail("'import *' is not supported");
          std::string name = expect_name();
          std::string alias = name;
          if (accept_kw("as")) alias = expect_name();
          s->names.push_back(name);
          s->aliases.push_back(alias);
        } while (accept_op(","));
        if (paren) expect_op(")");
        return s;
      }
      if (w == "raise" || w == "yield" || w == "return") fail("'" + w + "' is not supported");
    }

    auto first = parse_testlist();
    static const std::set<std::string, std::less<>> kAug = {"+=", "-=", "*=", "/=", "//=", "%=", "**="};
    if (at(Tok::Op) && kAug.contains(peek().text)) {
      auto s = make_stmt(StmtKind::AugAssign, l);
      s->op = peek().text.substr(0, peek().text.size() - 1);
      ++i_;
      check_target(*first, false);
      s->targets.push_back(std::move(first));
      s->value = parse_testlist();
      return s;
    }
    if (at_op("=")) {
      auto s = make_stmt(StmtKind::Assign, l);
      std::vector<ExprPtr> chain;
      chain.push_back(std::move(first));
      while (accept_op("=")) chain.push_back(parse_testlist());
      s->value = std::move(chain.back());
      chain.pop_back();
      for (auto& t : chain) check_target(*t, true);
      s->targets = std::move(chain);
      return s;
    }
    auto s = make_stmt(StmtKind::Expr, l);
    s->value = std::move(first);
    return s;
  }

  void check_target(const Expr& e, bool allow_tuple) const {
    switch (e.kind) {
      case ExprKind::Name:
      case ExprKind::Subscript:
      case ExprKind::Attribute:
        return;
      case ExprKind::Tuple:
      case ExprKind::List:
        if (!allow_tuple) break;
        for (const auto& c : e.children) check_target(*c, true);
        return;
      default:
        break;
    }
    throw SyntaxError(e.line + 0, "cannot assign to expression");
  }

  std::string parse_dotted_name() {
    std::string name = expect_name();
    while (accept_op(".")) name += "." + expect_name();
    return name;
  }

  // Targets for `for` and comprehensions: stops before `in`.
  ExprPtr parse_target_list() {
    int l = line();
    std::vector<ExprPtr> items;
    bool trailing = false;
    items.push_back(parse_arith());
    while (accept_op(",")) {
      trailing = true;
      if (at_kw("in") || at(Tok::Newline)) break;
      items.push_back(parse_arith());
      trailing = false;
    }
    for (const auto& t : items) check_target(*t, true);
    if (items.size() == 1 && !trailing) return std::move(items.front());
    auto tuple = make_expr(ExprKind::Tuple, l);
    tuple->children = std::move(items);
    return tuple;
  }

  ExprPtr parse_testlist() {
    int l = line();
    auto first = parse_test();
    if (!at_op(",")) return first;
    auto tuple = make_expr(ExprKind::Tuple, l);
    tuple->children.push_back(std::move(first));
    while (accept_op(",")) {
      if (at(Tok::Newline) || at_op("=") || at_op(")") || at_op(";") || at_op(":")) break;
      tuple->children.push_back(parse_test());
    }
    return tuple;
  }

  ExprPtr parse_test() {
    if (at_kw("lambda")) {
      int l = line();
      ++i_;
      auto e = make_expr(ExprKind::Lambda, l);
      e->params = parse_params(":");
      expect_op(":");
      e->children.push_back(parse_test());
      return e;
    }
    int l = line();
    auto body = parse_or();
    if (at_kw("if")) {
      // A trailing `if` inside a comprehension belongs to the comprehension.
      std::size_t save = i_;
      ++i_;
      auto test = parse_or();
      if (!accept_kw("else")) {
        i_ = save;
        return body;
      }
      auto orelse = parse_test();
      auto e = make_expr(ExprKind::IfExp, l);
      e->children.push_back(std::move(body));
      e->children.push_back(std::move(test));
      e->children.push_back(std::move(orelse));
      return e;
    }
    return body;
  }

  ExprPtr parse_or() {
    int l = line();
    auto first = parse_and();
    if (!at_kw("or")) return first;
    auto e = make_expr(ExprKind::BoolOp, l);
    e->name = "or";
    e->children.push_back(std::move(first));
    while (accept_kw("or")) e->children.push_back(parse_and());
    return e;
  }

  ExprPtr parse_and() {
    int l = line();
    auto first = parse_not();
    if (!at_kw("and")) return first;
    auto e = make_expr(ExprKind::BoolOp, l);
    e->name = "and";
    e->children.push_back(std::move(first));
    while (accept_kw("and")) e->children.push_back(parse_not());
    return e;
  }

  ExprPtr parse_not() {
    if (at_kw("not")) {
      int l = line();
      ++i_;
      auto e = make_expr(ExprKind::Unary, l);
      e->name = "not";
      e->children.push_back(parse_not());
      return e;
    }
    return parse_comparison();
  }

  std::optional<std::string> comparison_op() {
    if (at(Tok::Op)) {
      const std::string& t = peek().text;
      if (t == "<" || t == ">" || t == "==" || t == "!=" || t == "<=" || t == ">=") {
        ++i_;
        return t;
      }
      return std::nullopt;
    }
    if (at_kw("in")) {
      ++i_;
      return "in";
    }
    if (at_kw("not") && peek(1).kind == Tok::Name && peek(1).text == "in") {
      i_ += 2;
      return "not in";
    }
    if (at_kw("is")) {
      ++i_;
      if (accept_kw("not")) return "is not";
      return "is";
    }
    return std::nullopt;
  }

  ExprPtr parse_comparison() {
    int l = line();
    auto first = parse_arith();
    auto op = comparison_op();
    if (!op) return first;
    auto e = make_expr(ExprKind::Compare, l);
    e->children.push_back(std::move(first));
    while (op) {
      e->ops.push_back(*op);
      e->children.push_back(parse_arith());
      op = comparison_op();
    }
    return e;
  }

  ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs, int l) {
    auto e = make_expr(ExprKind::Binary, l);
    e->name = std::move(op);
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
  }

  ExprPtr parse_arith() {
    auto e = parse_term();
    while (at_op("+") || at_op("-")) {
      int l = line();
      std::string op = toks_[i_++].text;
      e = binary(op, std::move(e), parse_term(), l);
    }
    return e;
  }

  ExprPtr parse_term() {
    auto e = parse_factor();
    while (at_op("*") || at_op("/") || at_op("//") || at_op("%")) {
      int l = line();
      std::string op = toks_[i_++].text;
      e = binary(op, std::move(e), parse_factor(), l);
    }
    return e;
  }

  ExprPtr parse_factor() {
    if (at_op("-") || at_op("+")) {
      int l = line();
      auto e = make_expr(ExprKind::Unary, l);
      e->name = toks_[i_++].text;
      e->children.push_back(parse_factor());
      return e;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    auto base = parse_primary();
    if (at_op("**")) {
      int l = line();
      ++i_;
      return binary("**", std::move(base), parse_factor(), l);
    }
    return base;
  }

  ExprPtr parse_primary() {
    auto e = parse_atom();
    for (;;) {
      int l = line();
      if (accept_op("(")) {
        auto call = make_expr(ExprKind::Call, l);
        call->children.push_back(std::move(e));
        parse_call_args(*call);
        expect_op(")");
        e = std::move(call);
      } else if (accept_op("[")) {
        auto sub = make_expr(ExprKind::Subscript, l);
        sub->children.push_back(std::move(e));
        sub->children.push_back(parse_subscript());
        expect_op("]");
        e = std::move(sub);
      } else if (accept_op(".")) {
        auto attr = make_expr(ExprKind::Attribute, l);
        attr->children.push_back(std::move(e));
        attr->name = expect_name();
        e = std::move(attr);
      } else {
        return e;
      }
    }
  }

  void parse_call_args(Expr& call) {
    while (!at_op(")")) {
      if (at(Tok::Name) && peek(1).kind == Tok::Op && peek(1).text == "=") {
        std::string name = expect_name();
        ++i_;
        call.kwargs.emplace_back(name, parse_test());
      } else {
        if (!call.kwargs.empty()) fail("positional argument follows keyword argument");
        auto arg = parse_test();
        if (at_kw("for")) {
          arg = parse_comprehension(std::move(arg), arg->line);
        }
        call.children.push_back(std::move(arg));
      }
      if (!accept_op(",")) break;
    }
  }

  ExprPtr parse_subscript() {
    int l = line();
    ExprPtr lower, upper, step;
    if (!at_op(":")) {
      auto index = parse_test();
      if (!at_op(":")) {
        if (at_op(",")) {
          auto tuple = make_expr(ExprKind::Tuple, l);
          tuple->children.push_back(std::move(index));
          while (accept_op(",")) {
            if (at_op("]")) break;
            tuple->children.push_back(parse_test());
          }
          return tuple;
        }
        return index;
      }
      lower = std::move(index);
    }
    expect_op(":");
    if (!at_op("]") && !at_op(":")) upper = parse_test();
    if (accept_op(":")) {
      if (!at_op("]")) step = parse_test();
    }
    auto slice = make_expr(ExprKind::Slice, l);
    slice->children.push_back(std::move(lower));
    slice->children.push_back(std::move(upper));
    slice->children.push_back(std::move(step));
    return slice;
  }

  ExprPtr parse_comprehension(ExprPtr element, int l) {
    auto comp = make_expr(ExprKind::ListComp, l);
    comp->children.push_back(std::move(element));
    while (accept_kw("for")) {
      Comprehension c;
      c.target = parse_target_list();
      if (!accept_kw("in")) fail("invalid syntax");
      c.iter = parse_or();
      while (accept_kw("if")) c.conditions.push_back(parse_or());
      comp->comps.push_back(std::move(c));
    }
    return comp;
  }

  ExprPtr parse_atom() {
    const Token& t = peek();
    int l = line();
    switch (t.kind) {
      case Tok::Int: {
        auto e = make_expr(ExprKind::Int, l);
        e->int_value = t.int_value;
        ++i_;
        return e;
      }
      case Tok::Float: {
        auto e = make_expr(ExprKind::Float, l);
        e->float_value = t.float_value;
        ++i_;
        return e;
      }
      case Tok::Str:
        return parse_strings();
      case Tok::Name: {
        if (t.text == "None" || t.text == "True" || t.text == "False") {
          ++i_;
          return make_expr(t.text == "None" ? ExprKind::None
                           : t.text == "True" ? ExprKind::True
                                              : ExprKind::False,
                           l);
        }
        auto e = make_expr(ExprKind::Name, l);
        e->name = expect_name();
        return e;
      }
      case Tok::Op:
        if (t.text == "(") return parse_paren();
        if (t.text == "[") return parse_list();
        if (t.text == "{") return parse_dict();
        break;
      default:
        break;
    }
    fail("invalid syntax");
  }

  ExprPtr parse_paren() {
    int l = line();
    ++i_;
    if (accept_op(")")) return make_expr(ExprKind::Tuple, l);
    auto first = parse_test();
    if (at_kw("for")) {
      auto comp = parse_comprehension(std::move(first), l);
      expect_op(")");
      return comp;
    }
    if (accept_op(")")) return first;
    auto tuple = make_expr(ExprKind::Tuple, l);
    tuple->children.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op(")")) break;
      tuple->children.push_back(parse_test());
    }
    expect_op(")");
    return tuple;
  }

  ExprPtr parse_list() {
    int l = line();
    ++i_;
    auto list = make_expr(ExprKind::List, l);
    if (accept_op("]")) return list;
    auto first = parse_test();
    if (at_kw("for")) {
      auto comp = parse_comprehension(std::move(first), l);
      expect_op("]");
      return comp;
    }
    list->children.push_back(std::move(first));
    while (accept_op(",")) {
      if (at_op("]")) break;
      list->children.push_back(parse_test());
    }
    expect_op("]");
    return list;
  }

  ExprPtr parse_dict() {
    int l = line();
    ++i_;
    auto dict = make_expr(ExprKind::Dict, l);
    while (!at_op("}")) {
      dict->children.push_back(parse_test());
      expect_op(":");
      dict->children.push_back(parse_test());
      if (at_kw("for")) fail("dict comprehensions are not supported");
      if (!accept_op(",")) break;
    }
    expect_op("}");
    return dict;
  }

  ExprPtr parse_strings() {
    int l = line();
    bool any_f = false;
    std::vector<Token> parts;
    while (at(Tok::Str)) {
      any_f = any_f || peek().fstring;
      parts.push_back(toks_[i_++]);
    }
    if (!any_f) {
      auto e = make_expr(ExprKind::Str, l);
      for (const auto& p : parts) e->name += p.text;
      return e;
    }
    auto e = make_expr(ExprKind::FStr, l);
    for (const auto& p : parts) {
      if (!p.fstring) {
        auto lit = make_expr(ExprKind::Str, l);
        lit->name = p.text;
        e->children.push_back(std::move(lit));
        continue;
      }
      split_fstring(p.text, l, *e);
    }
    return e;
  }

  void split_fstring(const std::string& text, int l, Expr& out) {
    std::string literal;
    auto flush = [&] {
      if (literal.empty()) return;
      auto lit = make_expr(ExprKind::Str, l);
      lit->name = std::move(literal);
      literal.clear();
      out.children.push_back(std::move(lit));
    };
    for (std::size_t k = 0; k < text.size(); ++k) {
      char c = text[k];
      if (c == '{' && k + 1 < text.size() && text[k + 1] == '{') {
        literal.push_back('{');
        ++k;
      } else if (c == '}' && k + 1 < text.size() && text[k + 1] == '}') {
        literal.push_back('}');
        ++k;
      } else if (c == '{') {
        int depth = 1;
        std::size_t start = k + 1, end = start;
        for (; end < text.size(); ++end) {
          if (text[end] == '{' || text[end] == '[' || text[end] == '(') ++depth;
          if (text[end] == '}' || text[end] == ']' || text[end] == ')') --depth;
          if (depth == 0) break;
        }
        if (end >= text.size()) throw SyntaxError(l, "f-string: expecting '}'");
        std::string inner = text.substr(start, end - start);
        std::string conversion;
        if (auto bang = inner.rfind('!'); bang != std::string::npos && bang + 2 == inner.size() &&
                                          inner[bang + 1] != '=') {
          conversion = inner.substr(bang + 1);
          inner.resize(bang);
        }
        if (inner.find(':') != std::string::npos && inner.find('[') == std::string::npos) {
          throw SyntaxError(l, "f-string format specs are not supported");
        }
        flush();
        Lexer lexer(inner);
        Parser sub(lexer.run(), l - 1);
        auto expr = sub.parse_standalone_expression();
        auto holder = make_expr(ExprKind::Call, l);
        holder->name = conversion == "r" ? "repr" : "str";
        holder->children.push_back(std::move(expr));
        out.children.push_back(std::move(holder));
        k = end;
      } else if (c == '}') {
        throw SyntaxError(l, "f-string: single '}' is not allowed");
      } else {
        literal.push_back(c);
      }
    }
    flush();
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  int line_offset_ = 0;
};

}  // namespace

std::shared_ptr<Module> parse_module(const std::string& file, const std::string& source) {
  Lexer lexer(source);
  Parser parser(lexer.run());
  auto module = std::make_shared<Module>();
  module->file = file;
  module->body = parser.parse_file();
  return module;
}

}  // namespace minipy
