// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// A small interpreter for the Python subset used by the exercise corpus.
// It exists so the stub test adapter can run suites and record exact
// per-test line coverage without a Python runtime.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ast.hpp"

namespace minipy {

struct List;
struct Tuple;
struct Dict;
struct Function;
struct Builtin;
struct BoundMethod;
struct ModuleObject;
struct Stream;

struct NoneType {
  bool operator==(const NoneType&) const = default;
};

using Value = std::variant<NoneType, bool, std::int64_t, double, std::string, std::shared_ptr<List>,
                           std::shared_ptr<Tuple>, std::shared_ptr<Dict>, std::shared_ptr<Function>,
                           std::shared_ptr<Builtin>, std::shared_ptr<BoundMethod>,
                           std::shared_ptr<ModuleObject>, std::shared_ptr<Stream>>;

struct List {
  std::vector<Value> items;
};
struct Tuple {
  std::vector<Value> items;
};
struct Dict {
  std::vector<std::pair<Value, Value>> items;
};

struct Env {
  std::unordered_map<std::string, Value> vars;
  std::shared_ptr<Env> parent;
  std::set<std::string> declared_global;
};

struct ModuleObject {
  std::string name;
  std::string file;  // relative path, empty for builtin modules
  bool subject = false;
  std::shared_ptr<Module> ast;
  std::shared_ptr<Env> globals;
};

struct Function {
  std::string name;
  const std::vector<Param>* params = nullptr;
  const Block* body = nullptr;
  const Expr* lambda_body = nullptr;
  std::vector<Value> defaults;  // aligned with params; unset entries are NoneType
  std::vector<bool> has_default;
  std::shared_ptr<Env> closure;
  std::shared_ptr<ModuleObject> module;
};

class Interpreter;
using Kwargs = std::vector<std::pair<std::string, Value>>;

struct Builtin {
  std::string name;
  std::function<Value(Interpreter&, std::vector<Value>&, Kwargs&)> fn;
};

struct BoundMethod {
  Value self;
  std::string name;
};

struct Stream {
  bool is_stderr = false;
};

/// A Python-level exception (TypeError, AssertionError, ...).
class PyError : public std::runtime_error {
 public:
  PyError(std::string type, std::string message)
      : std::runtime_error(type + ": " + message), type_(std::move(type)), message_(std::move(message)) {}
  const std::string& type() const { return type_; }
  const std::string& message() const { return message_; }
  std::string file;
  int line = 0;

 private:
  std::string type_;
  std::string message_;
};

enum class TestVerdict { Pass, Fail, Error };

struct TestResult {
  std::string name;
  TestVerdict verdict = TestVerdict::Pass;
  std::string message;
  std::set<std::pair<std::string, int>> covered;
  std::string stdout_text;
  std::string stderr_text;
};

struct Limits {
  std::int64_t max_steps = 2'000'000;
  int max_depth = 400;
  std::int64_t max_sequence = 10'000'000;
};

class Interpreter {
 public:
  Interpreter(std::filesystem::path root, std::set<std::string> subject_files, Limits limits = {});

  /// Imports the test module and runs every top-level `test_*` function in
  /// definition order. Throws SyntaxError if the test file itself is invalid.
  std::vector<TestResult> run_test_file(const std::string& relative_path);

  // Used by builtins.
  Value call(const Value& callee, std::vector<Value> args, Kwargs kwargs = {});
  std::string str(const Value& v);
  std::string repr(const Value& v);
  bool truthy(const Value& v);
  bool equals(const Value& a, const Value& b);
  int compare(const Value& a, const Value& b);  // -1/0/1; TypeError if unordered
  std::vector<Value> iterate(const Value& v);
  std::string& out_stream(bool is_stderr) { return is_stderr ? stderr_ : stdout_; }
  std::shared_ptr<ModuleObject> import_module(const std::string& name);
  const Limits& limits() const { return limits_; }

 private:
  enum class Flow { Normal, Break, Continue, Return };
  struct Frame {
    std::shared_ptr<Env> env;
    std::shared_ptr<ModuleObject> module;
    Value return_value;
    bool is_function = false;
  };

  Flow exec_block(const Block& block, Frame& frame);
  Flow exec(const Stmt& stmt, Frame& frame);
  Flow exec_inner(const Stmt& stmt, Frame& frame);
  void exec_assert(const Stmt& stmt, Frame& frame);
  Value eval(const Expr& e, Frame& frame);
  Value eval_call(const Expr& e, Frame& frame);
  Value eval_compare(const Expr& e, Frame& frame);
  Value eval_list_comp(const Expr& e, Frame& frame);
  void comp_loop(const Expr& e, std::size_t level, Frame& frame, List& out);
  Value binary_op(const std::string& op, const Value& a, const Value& b);
  bool compare_op(const std::string& op, const Value& a, const Value& b);
  bool contains(const Value& container, const Value& item);
  void assign(const Expr& target, const Value& value, Frame& frame);
  void delete_target(const Expr& target, Frame& frame);
  Value lookup(const std::string& name, Frame& frame);
  Value get_attr(const Value& obj, const std::string& name);
  Value get_item(const Value& obj, const Value& index);
  void set_item(const Value& obj, const Value& index, const Value& value);
  Value call_function(const Function& fn, std::vector<Value> args, Kwargs kwargs);
  Value call_method(const Value& self, const std::string& name, std::vector<Value>& args, Kwargs& kwargs);
  std::shared_ptr<ModuleObject> load_module(const std::string& name, const std::string& file);
  void record(const Frame& frame, int line);
  void install_builtins();

  std::filesystem::path root_;
  std::set<std::string> subject_files_;
  Limits limits_;
  std::unordered_map<std::string, Value> builtins_;
  std::map<std::string, std::shared_ptr<ModuleObject>> modules_;
  std::set<std::pair<std::string, int>>* coverage_ = nullptr;
  std::int64_t steps_ = 0;
  int depth_ = 0;
  std::string stdout_;
  std::string stderr_;
};

}  // namespace minipy
