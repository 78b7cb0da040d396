// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace minipy {

/// Raised by the lexer/parser. Line is 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, const std::string& message)
      : std::runtime_error(message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class ExprKind {
  Name,
  Int,
  Float,
  Str,
  FStr,  // children: alternating literal Str / expression parts
  None,
  True,
  False,
  List,
  Tuple,
  Dict,   // children: k0, v0, k1, v1, ...
  ListComp,  // children[0]: element; comps
  Unary,     // op: "-", "+", "not"
  Binary,    // op: + - * / // % **
  BoolOp,    // op: and / or; children: operands
  Compare,   // ops: list of comparison operators; children: operands
  IfExp,     // children: body, test, orelse
  Call,      // children[0]: callee; args; kwargs
  Subscript, // children: value, index
  Slice,     // children: lower, upper, step (nullable)
  Attribute, // children[0]: value; name
  Lambda,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Comprehension {
  ExprPtr target;
  ExprPtr iter;
  std::vector<ExprPtr> conditions;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Param {
  std::string name;
  ExprPtr default_value;
};

struct Expr {
  ExprKind kind;
  int line = 0;
  std::string name;  // identifier, string literal, operator, attribute
  std::int64_t int_value = 0;
  double float_value = 0.0;
  std::vector<ExprPtr> children;
  std::vector<std::string> ops;  // Compare operators
  std::vector<std::pair<std::string, ExprPtr>> kwargs;
  std::vector<Comprehension> comps;
  std::vector<Param> params;  // Lambda
};

enum class StmtKind {
  Expr,
  Assign,     // targets (chained), value
  AugAssign,  // target, op, value
  Pass,
  Break,
  Continue,
  Return,
  Assert,
  If,
  While,
  For,
  Def,
  Import,      // names: module names, aliases
  ImportFrom,  // module, names, aliases
  Global,
  Del,
};

struct Stmt {
  StmtKind kind;
  int line = 0;
  std::vector<ExprPtr> targets;
  ExprPtr value;  // Assign value / Return / Expr / Assert test / If/While test
  ExprPtr message;  // Assert message
  std::string op;   // AugAssign op
  std::string name;  // Def name / ImportFrom module
  std::vector<Param> params;
  std::vector<std::string> names;
  std::vector<std::string> aliases;
  Block body;
  Block orelse;
  // elif chains are nested If statements in orelse, flagged so the
  // interpreter records their header line on evaluation.
  bool is_elif = false;
};

struct Module {
  std::string file;
  Block body;
};

/// Parses a whole source file; throws SyntaxError.
std::shared_ptr<Module> parse_module(const std::string& file, const std::string& source);

}  // namespace minipy
