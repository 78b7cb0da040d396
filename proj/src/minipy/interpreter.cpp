// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace minipy {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string type_name(const Value& v) {
  static const char* kNames[] = {"NoneType", "bool",     "int",
                                 "float",    "str",      "list",
                                 "tuple",    "dict",     "function",
                                 "builtin_function_or_method", "method", "module",
                                 "TextIOWrapper"};
  return kNames[v.index()];
}

bool is_int_like(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<bool>(v);
}
bool is_number(const Value& v) { return is_int_like(v) || std::holds_alternative<double>(v); }

std::int64_t as_int(const Value& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1 : 0;
  return std::get<std::int64_t>(v);
}
double as_double(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return static_cast<double>(as_int(v));
}

std::string float_repr(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  int precision = 0;
  for (; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*e", precision, d);
    if (std::strtod(buf, nullptr) == d) break;
  }
  const char* e = std::strchr(buf, 'e');
  int exponent = std::atoi(e + 1);
  if (exponent >= -4 && exponent < 16) {
    int decimals = std::max(0, precision - exponent);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, d);
    std::string s = buf;
    if (decimals == 0) s += ".0";
    return s;
  }
  return buf;
}

std::string string_repr(const std::string& s) {
  char quote = (s.find('\'') != std::string::npos && s.find('"') == std::string::npos) ? '"' : '\'';
  std::string out(1, quote);
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == static_cast<unsigned char>(quote)) {
          out.push_back('\\');
          out.push_back(static_cast<char>(c));
        } else if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  out.push_back(quote);
  return out;
}

// By reference: argument evaluation order is unspecified, so `value` must be
// read only after the overflow builtin has stored into it.
std::int64_t checked(bool overflow, const std::int64_t& value) {
  if (overflow) throw PyError("OverflowError", "integer result too large for this interpreter");
  return value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  if (b == 0) throw PyError("ZeroDivisionError", "integer division or modulo by zero");
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t py_mod(std::int64_t a, std::int64_t b) {
  if (b == 0) throw PyError("ZeroDivisionError", "integer division or modulo by zero");
  std::int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

// Resolves Python slice bounds for a sequence of `length`.
std::vector<std::int64_t> slice_indices(std::int64_t length, const Value& lower, const Value& upper,
                                        const Value& step_value) {
  std::int64_t step = std::holds_alternative<NoneType>(step_value) ? 1 : as_int(step_value);
  if (step == 0) throw PyError("ValueError", "slice step cannot be zero");
  auto clamp = [&](const Value& v, std::int64_t dflt) -> std::int64_t {
    if (std::holds_alternative<NoneType>(v)) return dflt;
    if (!is_int_like(v)) throw PyError("TypeError", "slice indices must be integers or None");
    std::int64_t i = as_int(v);
    if (i < 0) i += length;
    if (step > 0) return std::clamp<std::int64_t>(i, 0, length);
    return std::clamp<std::int64_t>(i, -1, length - 1);
  };
  std::int64_t start = clamp(lower, step > 0 ? 0 : length - 1);
  std::int64_t stop = clamp(upper, step > 0 ? length : -1);
  std::vector<std::int64_t> out;
  if (step > 0) {
    for (std::int64_t i = start; i < stop; i += step) out.push_back(i);
  } else {
    for (std::int64_t i = start; i > stop; i += step) out.push_back(i);
  }
  return out;
}

std::int64_t normalize_index(std::int64_t i, std::size_t size, const char* what) {
  std::int64_t n = static_cast<std::int64_t>(size);
  if (i < 0) i += n;
  if (i < 0 || i >= n) throw PyError("IndexError", std::string(what) + " index out of range");
  return i;
}

Value make_list(std::vector<Value> items) {
  auto l = std::make_shared<List>();
  l->items = std::move(items);
  return l;
}
Value make_tuple(std::vector<Value> items) {
  auto t = std::make_shared<Tuple>();
  t->items = std::move(items);
  return t;
}

void expect_args(const std::string& name, const std::vector<Value>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi) {
    throw PyError("TypeError", name + "() takes " +
                                   (lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi)) +
                                   " arguments (" + std::to_string(args.size()) + " given)");
  }
}

}  // namespace

Interpreter::Interpreter(std::filesystem::path root, std::set<std::string> subject_files, Limits limits)
    : root_(std::move(root)), subject_files_(std::move(subject_files)), limits_(limits) {
  install_builtins();
}

// ---------------------------------------------------------------------------
// Value protocol
// ---------------------------------------------------------------------------

std::string Interpreter::str(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return repr(v);
}

std::string Interpreter::repr(const Value& v) {
  auto join = [this](const std::vector<Value>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += repr(items[i]);
    }
    return out;
  };
  return std::visit(
      Overloaded{
          [](const NoneType&) -> std::string { return "None"; },
          [](bool b) -> std::string { return b ? "True" : "False"; },
          [](std::int64_t i) -> std::string { return std::to_string(i); },
          [](double d) -> std::string { return float_repr(d); },
          [](const std::string& s) -> std::string { return string_repr(s); },
          [&](const std::shared_ptr<List>& l) -> std::string { return "[" + join(l->items) + "]"; },
          [&](const std::shared_ptr<Tuple>& t) -> std::string {
            if (t->items.size() == 1) return "(" + repr(t->items[0]) + ",)";
            return "(" + join(t->items) + ")";
          },
          [&](const std::shared_ptr<Dict>& d) -> std::string {
            std::string out = "{";
            for (std::size_t i = 0; i < d->items.size(); ++i) {
              if (i) out += ", ";
              out += repr(d->items[i].first) + ": " + repr(d->items[i].second);
            }
            return out + "}";
          },
          [](const std::shared_ptr<Function>& f) -> std::string { return "<function " + f->name + ">"; },
          [](const std::shared_ptr<Builtin>& b) -> std::string { return "<built-in function " + b->name + ">"; },
          [](const std::shared_ptr<BoundMethod>& m) -> std::string { return "<method " + m->name + ">"; },
          [](const std::shared_ptr<ModuleObject>& m) -> std::string { return "<module '" + m->name + "'>"; },
          [](const std::shared_ptr<Stream>& s) -> std::string {
            return s->is_stderr ? "<stderr>" : "<stdout>";
          },
      },
      v);
}

bool Interpreter::truthy(const Value& v) {
  return std::visit(Overloaded{
                        [](const NoneType&) { return false; },
                        [](bool b) { return b; },
                        [](std::int64_t i) { return i != 0; },
                        [](double d) { return d != 0.0; },
                        [](const std::string& s) { return !s.empty(); },
                        [](const std::shared_ptr<List>& l) { return !l->items.empty(); },
                        [](const std::shared_ptr<Tuple>& t) { return !t->items.empty(); },
                        [](const std::shared_ptr<Dict>& d) { return !d->items.empty(); },
                        [](const auto&) { return true; },
                    },
                    v);
}

bool Interpreter::equals(const Value& a, const Value& b) {
  if (is_number(a) && is_number(b)) {
    if (is_int_like(a) && is_int_like(b)) return as_int(a) == as_int(b);
    return as_double(a) == as_double(b);
  }
  if (a.index() != b.index()) return false;
  return std::visit(
      Overloaded{
          [](const NoneType&) { return true; },
          [&](const std::string& s) { return s == std::get<std::string>(b); },
          [&](const std::shared_ptr<List>& l) {
            const auto& r = std::get<std::shared_ptr<List>>(b)->items;
            if (l->items.size() != r.size()) return false;
            for (std::size_t i = 0; i < r.size(); ++i) {
              if (!equals(l->items[i], r[i])) return false;
            }
            return true;
          },
          [&](const std::shared_ptr<Tuple>& t) {
            const auto& r = std::get<std::shared_ptr<Tuple>>(b)->items;
            if (t->items.size() != r.size()) return false;
            for (std::size_t i = 0; i < r.size(); ++i) {
              if (!equals(t->items[i], r[i])) return false;
            }
            return true;
          },
          [&](const std::shared_ptr<Dict>& d) {
            const auto& r = std::get<std::shared_ptr<Dict>>(b)->items;
            if (d->items.size() != r.size()) return false;
            for (const auto& [k, v] : d->items) {
              bool found = false;
              for (const auto& [rk, rv] : r) {
                if (equals(k, rk)) {
                  found = equals(v, rv);
                  break;
                }
              }
              if (!found) return false;
            }
            return true;
          },
          [&](const std::shared_ptr<Function>& f) { return f == std::get<std::shared_ptr<Function>>(b); },
          [&](const std::shared_ptr<Builtin>& f) { return f == std::get<std::shared_ptr<Builtin>>(b); },
          [&](const std::shared_ptr<ModuleObject>& m) {
            return m == std::get<std::shared_ptr<ModuleObject>>(b);
          },
          [&](const std::shared_ptr<Stream>& s) { return s == std::get<std::shared_ptr<Stream>>(b); },
          [](const auto&) { return false; },
      },
      a);
}

int Interpreter::compare(const Value& a, const Value& b) {
  if (is_number(a) && is_number(b)) {
    if (is_int_like(a) && is_int_like(b)) {
      auto x = as_int(a), y = as_int(b);
      return x < y ? -1 : x > y ? 1 : 0;
    }
    double x = as_double(a), y = as_double(b);
    return x < y ? -1 : x > y ? 1 : 0;
  }
  auto seq_compare = [this](const std::vector<Value>& l, const std::vector<Value>& r) {
    for (std::size_t i = 0; i < l.size() && i < r.size(); ++i) {
      if (!equals(l[i], r[i])) return compare(l[i], r[i]);
    }
    return l.size() < r.size() ? -1 : l.size() > r.size() ? 1 : 0;
  };
  if (a.index() == b.index()) {
    if (const auto* s = std::get_if<std::string>(&a)) {
      int c = s->compare(std::get<std::string>(b));
      return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    if (const auto* l = std::get_if<std::shared_ptr<List>>(&a)) {
      return seq_compare((*l)->items, std::get<std::shared_ptr<List>>(b)->items);
    }
    if (const auto* t = std::get_if<std::shared_ptr<Tuple>>(&a)) {
      return seq_compare((*t)->items, std::get<std::shared_ptr<Tuple>>(b)->items);
    }
  }
  throw PyError("TypeError", "'<' not supported between instances of '" + type_name(a) + "' and '" +
                                 type_name(b) + "'");
}

std::vector<Value> Interpreter::iterate(const Value& v) {
  if (const auto* l = std::get_if<std::shared_ptr<List>>(&v)) return (*l)->items;
  if (const auto* t = std::get_if<std::shared_ptr<Tuple>>(&v)) return (*t)->items;
  if (const auto* d = std::get_if<std::shared_ptr<Dict>>(&v)) {
    std::vector<Value> keys;
    for (const auto& kv : (*d)->items) keys.push_back(kv.first);
    return keys;
  }
  if (const auto* s = std::get_if<std::string>(&v)) {
    std::vector<Value> chars;
    for (char c : *s) chars.emplace_back(std::string(1, c));
    return chars;
  }
  throw PyError("TypeError", "'" + type_name(v) + "' object is not iterable");
}

bool Interpreter::contains(const Value& container, const Value& item) {
  if (const auto* s = std::get_if<std::string>(&container)) {
    const auto* needle = std::get_if<std::string>(&item);
    if (!needle) throw PyError("TypeError", "'in <string>' requires string as left operand");
    return s->find(*needle) != std::string::npos;
  }
  for (const auto& v : iterate(container)) {
    if (equals(v, item)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

Value Interpreter::binary_op(const std::string& op, const Value& a, const Value& b) {
  if (is_number(a) && is_number(b)) {
    bool ints = is_int_like(a) && is_int_like(b);
    if (ints) {
      std::int64_t x = as_int(a), y = as_int(b), r = 0;
      if (op == "+") return checked(__builtin_add_overflow(x, y, &r), r);
      if (op == "-") return checked(__builtin_sub_overflow(x, y, &r), r);
      if (op == "*") return checked(__builtin_mul_overflow(x, y, &r), r);
      if (op == "//") return floor_div(x, y);
      if (op == "%") return py_mod(x, y);
      if (op == "/") {
        if (y == 0) throw PyError("ZeroDivisionError", "division by zero");
        return static_cast<double>(x) / static_cast<double>(y);
      }
      if (op == "**") {
        if (y < 0) return std::pow(static_cast<double>(x), static_cast<double>(y));
        std::int64_t result = 1;
        for (std::int64_t k = 0; k < y; ++k) {
          result = checked(__builtin_mul_overflow(result, x, &result), result);
          if (result == 0 || result == 1) break;
        }
        return result;
      }
    } else {
      double x = as_double(a), y = as_double(b);
      if (op == "+") return x + y;
      if (op == "-") return x - y;
      if (op == "*") return x * y;
      if (op == "/") {
        if (y == 0.0) throw PyError("ZeroDivisionError", "float division by zero");
        return x / y;
      }
      if (op == "//") {
        if (y == 0.0) throw PyError("ZeroDivisionError", "float floor division by zero");
        return std::floor(x / y);
      }
      if (op == "%") {
        if (y == 0.0) throw PyError("ZeroDivisionError", "float modulo");
        double r = std::fmod(x, y);
        if (r != 0.0 && ((r < 0) != (y < 0))) r += y;
        return r;
      }
      if (op == "**") return std::pow(x, y);
    }
  }
  if (op == "+") {
    if (std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b)) {
      return std::get<std::string>(a) + std::get<std::string>(b);
    }
    if (std::holds_alternative<std::shared_ptr<List>>(a) && std::holds_alternative<std::shared_ptr<List>>(b)) {
      auto items = std::get<std::shared_ptr<List>>(a)->items;
      const auto& rhs = std::get<std::shared_ptr<List>>(b)->items;
      items.insert(items.end(), rhs.begin(), rhs.end());
      return make_list(std::move(items));
    }
    if (std::holds_alternative<std::shared_ptr<Tuple>>(a) && std::holds_alternative<std::shared_ptr<Tuple>>(b)) {
      auto items = std::get<std::shared_ptr<Tuple>>(a)->items;
      const auto& rhs = std::get<std::shared_ptr<Tuple>>(b)->items;
      items.insert(items.end(), rhs.begin(), rhs.end());
      return make_tuple(std::move(items));
    }
  }
  if (op == "*") {
    const Value* seq = is_int_like(b) ? &a : is_int_like(a) ? &b : nullptr;
    const Value* count = is_int_like(b) ? &b : &a;
    if (seq && !is_number(*seq)) {
      std::int64_t n = std::max<std::int64_t>(0, as_int(*count));
      if (const auto* s = std::get_if<std::string>(seq)) {
        if (static_cast<std::int64_t>(s->size()) * n > limits_.max_sequence) {
          throw PyError("MemoryError", "sequence too large");
        }
        std::string out;
        for (std::int64_t i = 0; i < n; ++i) out += *s;
        return out;
      }
      if (const auto* l = std::get_if<std::shared_ptr<List>>(seq)) {
        if (static_cast<std::int64_t>((*l)->items.size()) * n > limits_.max_sequence) {
          throw PyError("MemoryError", "sequence too large");
        }
        std::vector<Value> out;
        for (std::int64_t i = 0; i < n; ++i) out.insert(out.end(), (*l)->items.begin(), (*l)->items.end());
        return make_list(std::move(out));
      }
    }
  }
  throw PyError("TypeError", "unsupported operand type(s) for " + op + ": '" + type_name(a) + "' and '" +
                                 type_name(b) + "'");
}

bool Interpreter::compare_op(const std::string& op, const Value& a, const Value& b) {
  if (op == "==") return equals(a, b);
  if (op == "!=") return !equals(a, b);
  if (op == "in") return contains(b, a);
  if (op == "not in") return !contains(b, a);
  if (op == "is" || op == "is not") {
    bool same = false;
    if (a.index() == b.index()) {
      same = std::visit(Overloaded{
                            [](const NoneType&) { return true; },
                            [&](bool x) { return x == std::get<bool>(b); },
                            [&](std::int64_t x) { return x == std::get<std::int64_t>(b); },
                            [&](double x) { return x == std::get<double>(b); },
                            [&](const std::string& x) { return x == std::get<std::string>(b); },
                            [&](const auto& p) { return p.get() == std::get<std::decay_t<decltype(p)>>(b).get(); },
                        },
                        a);
    }
    return op == "is" ? same : !same;
  }
  int c = compare(a, b);
  if (op == "<") return c < 0;
  if (op == "<=") return c <= 0;
  if (op == ">") return c > 0;
  if (op == ">=") return c >= 0;
  throw PyError("SyntaxError", "unknown comparison " + op);
}

// ---------------------------------------------------------------------------
// Items and attributes
// ---------------------------------------------------------------------------

Value Interpreter::get_item(const Value& obj, const Value& index) {
  if (const auto* d = std::get_if<std::shared_ptr<Dict>>(&obj)) {
    for (const auto& [k, v] : (*d)->items) {
      if (equals(k, index)) return v;
    }
    throw PyError("KeyError", repr(index));
  }
  auto sequence_item = [&](const auto& items, const char* what) -> Value {
    if (!is_int_like(index)) {
      throw PyError("TypeError", std::string(what) + " indices must be integers, not " + type_name(index));
    }
    return items[static_cast<std::size_t>(normalize_index(as_int(index), items.size(), what))];
  };
  if (const auto* l = std::get_if<std::shared_ptr<List>>(&obj)) return sequence_item((*l)->items, "list");
  if (const auto* t = std::get_if<std::shared_ptr<Tuple>>(&obj)) return sequence_item((*t)->items, "tuple");
  if (const auto* s = std::get_if<std::string>(&obj)) {
    if (!is_int_like(index)) throw PyError("TypeError", "string indices must be integers");
    return std::string(1, (*s)[static_cast<std::size_t>(normalize_index(as_int(index), s->size(), "string"))]);
  }
  throw PyError("TypeError", "'" + type_name(obj) + "' object is not subscriptable");
}

void Interpreter::set_item(const Value& obj, const Value& index, const Value& value) {
  if (const auto* d = std::get_if<std::shared_ptr<Dict>>(&obj)) {
    for (auto& [k, v] : (*d)->items) {
      if (equals(k, index)) {
        v = value;
        return;
      }
    }
    (*d)->items.emplace_back(index, value);
    return;
  }
  if (const auto* l = std::get_if<std::shared_ptr<List>>(&obj)) {
    if (!is_int_like(index)) throw PyError("TypeError", "list indices must be integers, not " + type_name(index));
    auto& items = (*l)->items;
    items[static_cast<std::size_t>(normalize_index(as_int(index), items.size(), "list assignment"))] = value;
    return;
  }
  throw PyError("TypeError", "'" + type_name(obj) + "' object does not support item assignment");
}

Value Interpreter::get_attr(const Value& obj, const std::string& name) {
  if (const auto* m = std::get_if<std::shared_ptr<ModuleObject>>(&obj)) {
    auto it = (*m)->globals->vars.find(name);
    if (it == (*m)->globals->vars.end()) {
      throw PyError("AttributeError", "module '" + (*m)->name + "' has no attribute '" + name + "'");
    }
    return it->second;
  }
  static const std::set<std::string> kList = {"append", "pop",  "insert",  "extend", "remove", "index",
                                              "count",  "sort", "reverse", "copy",   "clear"};
  static const std::set<std::string> kStr = {"join",    "split",      "strip",      "lstrip",  "rstrip",
                                             "upper",   "lower",      "startswith", "endswith", "replace",
                                             "find",    "isdigit",    "isalpha",    "count",   "isspace",
                                             "index",   "isupper",    "islower"};
  static const std::set<std::string> kDict = {"get", "keys", "values", "items", "pop", "setdefault", "copy"};
  bool ok = (std::holds_alternative<std::shared_ptr<List>>(obj) && kList.contains(name)) ||
            (std::holds_alternative<std::string>(obj) && kStr.contains(name)) ||
            (std::holds_alternative<std::shared_ptr<Dict>>(obj) && kDict.contains(name)) ||
            (std::holds_alternative<std::shared_ptr<Tuple>>(obj) && (name == "index" || name == "count")) ||
            (std::holds_alternative<std::shared_ptr<Stream>>(obj) && (name == "write" || name == "flush"));
  if (!ok) throw PyError("AttributeError", "'" + type_name(obj) + "' object has no attribute '" + name + "'");
  auto m = std::make_shared<BoundMethod>();
  m->self = obj;
  m->name = name;
  return m;
}

Value Interpreter::call_method(const Value& self, const std::string& name, std::vector<Value>& args,
                               Kwargs& kwargs) {
  const std::string qual = type_name(self) + "." + name;
  if (const auto* lp = std::get_if<std::shared_ptr<List>>(&self)) {
    auto& items = (*lp)->items;
    if (name == "append") {
      expect_args(qual, args, 1, 1);
      items.push_back(args[0]);
      return NoneType{};
    }
    if (name == "pop") {
      expect_args(qual, args, 0, 1);
      if (items.empty()) throw PyError("IndexError", "pop from empty list");
      std::int64_t i = args.empty() ? -1 : as_int(args[0]);
      auto idx = normalize_index(i, items.size(), "pop");
      Value v = items[static_cast<std::size_t>(idx)];
      items.erase(items.begin() + idx);
      return v;
    }
    if (name == "insert") {
      expect_args(qual, args, 2, 2);
      std::int64_t n = static_cast<std::int64_t>(items.size());
      std::int64_t i = as_int(args[0]);
      if (i < 0) i = std::max<std::int64_t>(0, i + n);
      i = std::min(i, n);
      items.insert(items.begin() + i, args[1]);
      return NoneType{};
    }
    if (name == "extend") {
      expect_args(qual, args, 1, 1);
      auto more = iterate(args[0]);
      items.insert(items.end(), more.begin(), more.end());
      return NoneType{};
    }
    if (name == "remove" || name == "index") {
      expect_args(qual, args, 1, 1);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (equals(items[i], args[0])) {
          if (name == "index") return static_cast<std::int64_t>(i);
          items.erase(items.begin() + static_cast<std::ptrdiff_t>(i));
          return NoneType{};
        }
      }
      throw PyError("ValueError", name == "index" ? repr(args[0]) + " is not in list" : "list.remove(x): x not in list");
    }
    if (name == "count") {
      expect_args(qual, args, 1, 1);
      std::int64_t n = 0;
      for (const auto& v : items) n += equals(v, args[0]) ? 1 : 0;
      return n;
    }
    if (name == "sort") {
      expect_args(qual, args, 0, 0);
      Value sorted = builtins_.at("sorted");
      std::vector<Value> sargs{self};
      Value result = call(sorted, sargs, kwargs);
      items = std::get<std::shared_ptr<List>>(result)->items;
      return NoneType{};
    }
    if (name == "reverse") {
      std::reverse(items.begin(), items.end());
      return NoneType{};
    }
    if (name == "copy") return make_list(items);
    if (name == "clear") {
      items.clear();
      return NoneType{};
    }
  }
  if (const auto* tp = std::get_if<std::shared_ptr<Tuple>>(&self)) {
    expect_args(qual, args, 1, 1);
    const auto& items = (*tp)->items;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (equals(items[i], args[0])) {
        if (name == "index") return static_cast<std::int64_t>(i);
        ++n;
      }
    }
    if (name == "index") throw PyError("ValueError", "tuple.index(x): x not in tuple");
    return n;
  }
  if (const auto* sp = std::get_if<std::string>(&self)) {
    const std::string& s = *sp;
    auto arg_str = [&](std::size_t i) -> const std::string& {
      const auto* v = std::get_if<std::string>(&args.at(i));
      if (!v) throw PyError("TypeError", qual + "() argument must be str, not " + type_name(args[i]));
      return *v;
    };
    if (name == "join") {
      expect_args(qual, args, 1, 1);
      std::string out;
      auto parts = iterate(args[0]);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto* p = std::get_if<std::string>(&parts[i]);
        if (!p) {
          throw PyError("TypeError", "sequence item " + std::to_string(i) + ": expected str instance, " +
                                         type_name(parts[i]) + " found");
        }
        if (i) out += s;
        out += *p;
      }
      return out;
    }
    if (name == "split") {
      expect_args(qual, args, 0, 1);
      std::vector<Value> out;
      if (args.empty() || std::holds_alternative<NoneType>(args[0])) {
        std::istringstream in(s);
        std::string word;
        while (in >> word) out.emplace_back(word);
      } else {
        const std::string& sep = arg_str(0);
        if (sep.empty()) throw PyError("ValueError", "empty separator");
        std::size_t start = 0, pos;
        while ((pos = s.find(sep, start)) != std::string::npos) {
          out.emplace_back(s.substr(start, pos - start));
          start = pos + sep.size();
        }
        out.emplace_back(s.substr(start));
      }
      return make_list(std::move(out));
    }
    if (name == "strip" || name == "lstrip" || name == "rstrip") {
      std::string chars = args.empty() ? std::string(" \t\n\r\f\v") : arg_str(0);
      std::size_t b = name == "rstrip" ? 0 : s.find_first_not_of(chars);
      if (b == std::string::npos) return std::string();
      std::size_t e = name == "lstrip" ? s.size() : s.find_last_not_of(chars) + 1;
      return s.substr(b, e - b);
    }
    if (name == "upper" || name == "lower") {
      std::string out = s;
      for (char& c : out) {
        c = static_cast<char>(name == "upper" ? std::toupper(static_cast<unsigned char>(c))
                                              : std::tolower(static_cast<unsigned char>(c)));
      }
      return out;
    }
    if (name == "startswith") return s.starts_with(arg_str(0));
    if (name == "endswith") return s.ends_with(arg_str(0));
    if (name == "replace") {
      expect_args(qual, args, 2, 2);
      const std::string& from = arg_str(0);
      const std::string& to = arg_str(1);
      if (from.empty()) return s;
      std::string out;
      std::size_t start = 0, pos;
      while ((pos = s.find(from, start)) != std::string::npos) {
        out += s.substr(start, pos - start) + to;
        start = pos + from.size();
      }
      return out + s.substr(start);
    }
    if (name == "find" || name == "index") {
      auto pos = s.find(arg_str(0));
      if (pos == std::string::npos) {
        if (name == "index") throw PyError("ValueError", "substring not found");
        return std::int64_t{-1};
      }
      return static_cast<std::int64_t>(pos);
    }
    if (name == "count") {
      const std::string& sub = arg_str(0);
      if (sub.empty()) return static_cast<std::int64_t>(s.size() + 1);
      std::int64_t n = 0;
      for (std::size_t pos = s.find(sub); pos != std::string::npos; pos = s.find(sub, pos + sub.size())) ++n;
      return n;
    }
    auto all_of = [&](auto pred) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [&](char c) { return pred(static_cast<unsigned char>(c)); });
    };
    if (name == "isdigit") return all_of([](unsigned char c) { return std::isdigit(c) != 0; });
    if (name == "isalpha") return all_of([](unsigned char c) { return std::isalpha(c) != 0; });
    if (name == "isspace") return all_of([](unsigned char c) { return std::isspace(c) != 0; });
    if (name == "isupper") return all_of([](unsigned char c) { return !std::isalpha(c) || std::isupper(c); });
    if (name == "islower") return all_of([](unsigned char c) { return !std::isalpha(c) || std::islower(c); });
  }
  if (const auto* dp = std::get_if<std::shared_ptr<Dict>>(&self)) {
    auto& items = (*dp)->items;
    if (name == "get" || name == "setdefault") {
      expect_args(qual, args, 1, 2);
      for (const auto& [k, v] : items) {
        if (equals(k, args[0])) return v;
      }
      Value dflt = args.size() > 1 ? args[1] : Value{NoneType{}};
      if (name == "setdefault") items.emplace_back(args[0], dflt);
      return dflt;
    }
    if (name == "pop") {
      expect_args(qual, args, 1, 2);
      for (auto it = items.begin(); it != items.end(); ++it) {
        if (equals(it->first, args[0])) {
          Value v = it->second;
          items.erase(it);
          return v;
        }
      }
      if (args.size() > 1) return args[1];
      throw PyError("KeyError", repr(args[0]));
    }
    std::vector<Value> out;
    for (const auto& [k, v] : items) {
      if (name == "keys") out.push_back(k);
      else if (name == "values") out.push_back(v);
      else if (name == "items") out.push_back(make_tuple({k, v}));
    }
    if (name == "copy") {
      auto d = std::make_shared<Dict>();
      d->items = items;
      return d;
    }
    return make_list(std::move(out));
  }
  if (const auto* st = std::get_if<std::shared_ptr<Stream>>(&self)) {
    if (name == "flush") return NoneType{};
    expect_args(qual, args, 1, 1);
    std::string text = str(args[0]);
    out_stream((*st)->is_stderr) += text;
    return static_cast<std::int64_t>(text.size());
  }
  throw PyError("AttributeError", "unsupported method " + qual);
}

// ---------------------------------------------------------------------------
// Calls
// ---------------------------------------------------------------------------

Value Interpreter::call(const Value& callee, std::vector<Value> args, Kwargs kwargs) {
  if (const auto* f = std::get_if<std::shared_ptr<Function>>(&callee)) {
    return call_function(**f, std::move(args), std::move(kwargs));
  }
  if (const auto* b = std::get_if<std::shared_ptr<Builtin>>(&callee)) {
    return (*b)->fn(*this, args, kwargs);
  }
  if (const auto* m = std::get_if<std::shared_ptr<BoundMethod>>(&callee)) {
    return call_method((*m)->self, (*m)->name, args, kwargs);
  }
  throw PyError("TypeError", "'" + type_name(callee) + "' object is not callable");
}

Value Interpreter::call_function(const Function& fn, std::vector<Value> args, Kwargs kwargs) {
  const auto& params = *fn.params;
  if (args.size() > params.size()) {
    throw PyError("TypeError", fn.name + "() takes " + std::to_string(params.size()) +
                                   " positional arguments but " + std::to_string(args.size()) + " were given");
  }
  auto env = std::make_shared<Env>();
  env->parent = fn.closure;
  std::vector<bool> bound(params.size(), false);
  for (std::size_t i = 0; i < args.size(); ++i) {
    env->vars[params[i].name] = std::move(args[i]);
    bound[i] = true;
  }
  for (auto& [name, value] : kwargs) {
    auto it = std::find_if(params.begin(), params.end(), [&](const Param& p) { return p.name == name; });
    if (it == params.end()) {
      throw PyError("TypeError", fn.name + "() got an unexpected keyword argument '" + name + "'");
    }
    auto idx = static_cast<std::size_t>(it - params.begin());
    if (bound[idx]) throw PyError("TypeError", fn.name + "() got multiple values for argument '" + name + "'");
    env->vars[name] = std::move(value);
    bound[idx] = true;
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (bound[i]) continue;
    if (!fn.has_default[i]) {
      throw PyError("TypeError", fn.name + "() missing required positional argument: '" + params[i].name + "'");
    }
    env->vars[params[i].name] = fn.defaults[i];
  }
  if (++depth_ > limits_.max_depth) {
    depth_ = 0;
    throw PyError("RecursionError", "maximum recursion depth exceeded");
  }
  struct DepthGuard {
    int& d;
    ~DepthGuard() {
      if (d > 0) --d;
    }
  } guard{depth_};
  Frame frame{env, fn.module, NoneType{}, true};
  if (fn.lambda_body) return eval(*fn.lambda_body, frame);
  exec_block(*fn.body, frame);
  return frame.return_value;
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

void Interpreter::record(const Frame& frame, int line) {
  if (coverage_ && frame.module && frame.module->subject) coverage_->emplace(frame.module->file, line);
}

Interpreter::Flow Interpreter::exec_block(const Block& block, Frame& frame) {
  for (const auto& stmt : block) {
    Flow f = exec(*stmt, frame);
    if (f != Flow::Normal) return f;
  }
  return Flow::Normal;
}

Interpreter::Flow Interpreter::exec(const Stmt& stmt, Frame& frame) {
  if (++steps_ > limits_.max_steps) {
    throw PyError("TimeoutError", "step budget exhausted (possible infinite loop)");
  }
  record(frame, stmt.line);
  try {
    return exec_inner(stmt, frame);
  } catch (PyError& e) {
    if (e.line == 0) {
      e.line = stmt.line;
      e.file = frame.module ? frame.module->file : "";
    }
    throw;
  }
}

Interpreter::Flow Interpreter::exec_inner(const Stmt& stmt, Frame& frame) {
  switch (stmt.kind) {
    case StmtKind::Expr:
      eval(*stmt.value, frame);
      return Flow::Normal;
    case StmtKind::Assign: {
      Value v = eval(*stmt.value, frame);
      for (const auto& t : stmt.targets) assign(*t, v, frame);
      return Flow::Normal;
    }
    case StmtKind::AugAssign: {
      const Expr& target = *stmt.targets[0];
      if (target.kind == ExprKind::Name) {
        Value current = lookup(target.name, frame);
        Value rhs = eval(*stmt.value, frame);
        if (stmt.op == "+" && std::holds_alternative<std::shared_ptr<List>>(current)) {
          auto more = iterate(rhs);
          auto& items = std::get<std::shared_ptr<List>>(current)->items;
          items.insert(items.end(), more.begin(), more.end());
        } else {
          assign(target, binary_op(stmt.op, current, rhs), frame);
        }
      } else if (target.kind == ExprKind::Subscript) {
        Value obj = eval(*target.children[0], frame);
        Value index = eval(*target.children[1], frame);
        Value rhs = eval(*stmt.value, frame);
        set_item(obj, index, binary_op(stmt.op, get_item(obj, index), rhs));
      } else {
        throw PyError("SyntaxError", "illegal expression for augmented assignment");
      }
      return Flow::Normal;
    }
    case StmtKind::Pass:
    case StmtKind::Global:
      if (stmt.kind == StmtKind::Global) {
        for (const auto& n : stmt.names) frame.env->declared_global.insert(n);
      }
      return Flow::Normal;
    case StmtKind::Break:
      return Flow::Break;
    case StmtKind::Continue:
      return Flow::Continue;
    case StmtKind::Return:
      frame.return_value = stmt.value ? eval(*stmt.value, frame) : Value{NoneType{}};
      return Flow::Return;
    case StmtKind::Assert:
      exec_assert(stmt, frame);
      return Flow::Normal;
    case StmtKind::Del:
      delete_target(*stmt.targets[0], frame);
      return Flow::Normal;
    case StmtKind::If:
      if (truthy(eval(*stmt.value, frame))) return exec_block(stmt.body, frame);
      return exec_block(stmt.orelse, frame);
    case StmtKind::While:
      for (;;) {
        record(frame, stmt.line);
        if (!truthy(eval(*stmt.value, frame))) return Flow::Normal;
        Flow f = exec_block(stmt.body, frame);
        if (f == Flow::Break) return Flow::Normal;
        if (f == Flow::Return) return f;
        if (++steps_ > limits_.max_steps) {
          throw PyError("TimeoutError", "step budget exhausted (possible infinite loop)");
        }
      }
    case StmtKind::For: {
      Value iterable = eval(*stmt.value, frame);
      auto run_body = [&](const Value& item) {
        assign(*stmt.targets[0], item, frame);
        return exec_block(stmt.body, frame);
      };
      if (const auto* lp = std::get_if<std::shared_ptr<List>>(&iterable)) {
        // Lists are iterated live so mutation during iteration behaves as in Python.
        auto list = *lp;
        for (std::size_t i = 0; i < list->items.size(); ++i) {
          Value item = list->items[i];
          Flow f = run_body(item);
          if (f == Flow::Break) break;
          if (f == Flow::Return) return f;
        }
      } else {
        for (const auto& item : iterate(iterable)) {
          Flow f = run_body(item);
          if (f == Flow::Break) break;
          if (f == Flow::Return) return f;
        }
      }
      return Flow::Normal;
    }
    case StmtKind::Def: {
      auto fn = std::make_shared<Function>();
      fn->name = stmt.name;
      fn->params = &stmt.params;
      fn->body = &stmt.body;
      fn->closure = frame.env;
      fn->module = frame.module;
      for (const auto& p : stmt.params) {
        fn->has_default.push_back(p.default_value != nullptr);
        fn->defaults.push_back(p.default_value ? eval(*p.default_value, frame) : Value{NoneType{}});
      }
      frame.env->vars[stmt.name] = fn;
      return Flow::Normal;
    }
    case StmtKind::Import:
      for (std::size_t i = 0; i < stmt.names.size(); ++i) {
        auto module = import_module(stmt.names[i]);
        frame.env->vars[stmt.aliases[i]] = module;
      }
      return Flow::Normal;
    case StmtKind::ImportFrom: {
      auto module = import_module(stmt.name);
      for (std::size_t i = 0; i < stmt.names.size(); ++i) {
        auto it = module->globals->vars.find(stmt.names[i]);
        if (it == module->globals->vars.end()) {
          throw PyError("ImportError", "cannot import name '" + stmt.names[i] + "' from '" + stmt.name + "'");
        }
        frame.env->vars[stmt.aliases[i]] = it->second;
      }
      return Flow::Normal;
    }
  }
  return Flow::Normal;
}

void Interpreter::exec_assert(const Stmt& stmt, Frame& frame) {
  const Expr& test = *stmt.value;
  std::string detail;
  if (test.kind == ExprKind::Compare && test.ops.size() == 1) {
    Value lhs = eval(*test.children[0], frame);
    Value rhs = eval(*test.children[1], frame);
    if (compare_op(test.ops[0], lhs, rhs)) return;
    detail = "assert " + repr(lhs) + " " + test.ops[0] + " " + repr(rhs);
    if (test.ops[0] == "==") {
      detail += "\n  expected: " + repr(rhs) + "\n  actual:   " + repr(lhs);
    }
  } else {
    Value v = eval(test, frame);
    if (truthy(v)) return;
    detail = "assert " + repr(v);
  }
  if (stmt.message) detail = str(eval(*stmt.message, frame)) + "\n" + detail;
  throw PyError("AssertionError", detail);
}

void Interpreter::assign(const Expr& target, const Value& value, Frame& frame) {
  switch (target.kind) {
    case ExprKind::Name: {
      std::shared_ptr<Env> env = frame.env;
      if (env->declared_global.contains(target.name)) env = frame.module->globals;
      env->vars[target.name] = value;
      return;
    }
    case ExprKind::Tuple:
    case ExprKind::List: {
      auto items = iterate(value);
      if (items.size() != target.children.size()) {
        throw PyError("ValueError", items.size() > target.children.size()
                                        ? "too many values to unpack (expected " +
                                              std::to_string(target.children.size()) + ")"
                                        : "not enough values to unpack (expected " +
                                              std::to_string(target.children.size()) + ", got " +
                                              std::to_string(items.size()) + ")");
      }
      for (std::size_t i = 0; i < items.size(); ++i) assign(*target.children[i], items[i], frame);
      return;
    }
    case ExprKind::Subscript: {
      Value obj = eval(*target.children[0], frame);
      const Expr& index = *target.children[1];
      if (index.kind == ExprKind::Slice) {
        auto* lp = std::get_if<std::shared_ptr<List>>(&obj);
        if (!lp) throw PyError("TypeError", "'" + type_name(obj) + "' object does not support slice assignment");
        auto& items = (*lp)->items;
        Value lo = index.children[0] ? eval(*index.children[0], frame) : Value{NoneType{}};
        Value hi = index.children[1] ? eval(*index.children[1], frame) : Value{NoneType{}};
        Value st = index.children[2] ? eval(*index.children[2], frame) : Value{NoneType{}};
        auto replacement = iterate(value);
        bool simple = std::holds_alternative<NoneType>(st) || as_int(st) == 1;
        auto idx = slice_indices(static_cast<std::int64_t>(items.size()), lo, hi, st);
        if (simple) {
          std::int64_t n = static_cast<std::int64_t>(items.size());
          auto bound = [&](const Value& v, std::int64_t dflt) {
            if (std::holds_alternative<NoneType>(v)) return dflt;
            std::int64_t i = as_int(v);
            if (i < 0) i += n;
            return std::clamp<std::int64_t>(i, 0, n);
          };
          std::int64_t start = bound(lo, 0);
          std::int64_t stop = std::max(start, bound(hi, n));
          items.erase(items.begin() + start, items.begin() + stop);
          items.insert(items.begin() + start, replacement.begin(), replacement.end());
        } else {
          if (idx.size() != replacement.size()) {
            throw PyError("ValueError", "attempt to assign sequence of size " + std::to_string(replacement.size()) +
                                            " to extended slice of size " + std::to_string(idx.size()));
          }
          for (std::size_t i = 0; i < idx.size(); ++i) items[static_cast<std::size_t>(idx[i])] = replacement[i];
        }
        return;
      }
      set_item(obj, eval(index, frame), value);
      return;
    }
    case ExprKind::Attribute:
      throw PyError("AttributeError", "cannot assign attribute '" + target.name + "'");
    default:
      throw PyError("SyntaxError", "cannot assign to expression");
  }
}

void Interpreter::delete_target(const Expr& target, Frame& frame) {
  if (target.kind == ExprKind::Name) {
    if (frame.env->vars.erase(target.name) == 0) {
      throw PyError("NameError", "name '" + target.name + "' is not defined");
    }
    return;
  }
  if (target.kind == ExprKind::Subscript) {
    Value obj = eval(*target.children[0], frame);
    Value index = eval(*target.children[1], frame);
    if (auto* lp = std::get_if<std::shared_ptr<List>>(&obj)) {
      auto& items = (*lp)->items;
      auto i = normalize_index(as_int(index), items.size(), "list assignment");
      items.erase(items.begin() + i);
      return;
    }
    if (auto* dp = std::get_if<std::shared_ptr<Dict>>(&obj)) {
      auto& items = (*dp)->items;
      for (auto it = items.begin(); it != items.end(); ++it) {
        if (equals(it->first, index)) {
          items.erase(it);
          return;
        }
      }
      throw PyError("KeyError", repr(index));
    }
  }
  if (target.kind == ExprKind::Tuple) {
    for (const auto& c : target.children) delete_target(*c, frame);
    return;
  }
  throw PyError("TypeError", "cannot delete this target");
}

Value Interpreter::lookup(const std::string& name, Frame& frame) {
  for (Env* env = frame.env.get(); env; env = env->parent.get()) {
    auto it = env->vars.find(name);
    if (it != env->vars.end()) return it->second;
  }
  if (frame.module) {
    auto it = frame.module->globals->vars.find(name);
    if (it != frame.module->globals->vars.end()) return it->second;
  }
  auto it = builtins_.find(name);
  if (it != builtins_.end()) return it->second;
  throw PyError("NameError", "name '" + name + "' is not defined");
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

Value Interpreter::eval(const Expr& e, Frame& frame) {
  switch (e.kind) {
    case ExprKind::Name:
      return lookup(e.name, frame);
    case ExprKind::Int:
      return e.int_value;
    case ExprKind::Float:
      return e.float_value;
    case ExprKind::Str:
      return e.name;
    case ExprKind::FStr: {
      std::string out;
      for (const auto& part : e.children) {
        if (part->kind == ExprKind::Str) {
          out += part->name;
        } else {
          Value v = eval(*part->children[0], frame);
          out += part->name == "repr" ? repr(v) : str(v);
        }
      }
      return out;
    }
    case ExprKind::None:
      return NoneType{};
    case ExprKind::True:
      return true;
    case ExprKind::False:
      return false;
    case ExprKind::List:
    case ExprKind::Tuple: {
      std::vector<Value> items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval(*c, frame));
      return e.kind == ExprKind::List ? make_list(std::move(items)) : make_tuple(std::move(items));
    }
    case ExprKind::Dict: {
      auto d = std::make_shared<Dict>();
      Value dv = d;
      for (std::size_t i = 0; i + 1 < e.children.size(); i += 2) {
        set_item(dv, eval(*e.children[i], frame), eval(*e.children[i + 1], frame));
      }
      return dv;
    }
    case ExprKind::ListComp:
      return eval_list_comp(e, frame);
    case ExprKind::Unary: {
      Value v = eval(*e.children[0], frame);
      if (e.name == "not") return !truthy(v);
      if (!is_number(v)) throw PyError("TypeError", "bad operand type for unary " + e.name + ": '" + type_name(v) + "'");
      if (e.name == "+") return is_int_like(v) ? Value{as_int(v)} : v;
      if (is_int_like(v)) {
        std::int64_t r = 0;
        return checked(__builtin_sub_overflow(std::int64_t{0}, as_int(v), &r), r);
      }
      return -std::get<double>(v);
    }
    case ExprKind::Binary: {
      Value a = eval(*e.children[0], frame);
      Value b = eval(*e.children[1], frame);
      return binary_op(e.name, a, b);
    }
    case ExprKind::BoolOp: {
      Value v;
      for (const auto& c : e.children) {
        v = eval(*c, frame);
        bool t = truthy(v);
        if (e.name == "and" && !t) return v;
        if (e.name == "or" && t) return v;
      }
      return v;
    }
    case ExprKind::Compare:
      return eval_compare(e, frame);
    case ExprKind::IfExp:
      return truthy(eval(*e.children[1], frame)) ? eval(*e.children[0], frame) : eval(*e.children[2], frame);
    case ExprKind::Call:
      return eval_call(e, frame);
    case ExprKind::Subscript: {
      Value obj = eval(*e.children[0], frame);
      const Expr& index = *e.children[1];
      if (index.kind == ExprKind::Slice) {
        Value lo = index.children[0] ? eval(*index.children[0], frame) : Value{NoneType{}};
        Value hi = index.children[1] ? eval(*index.children[1], frame) : Value{NoneType{}};
        Value st = index.children[2] ? eval(*index.children[2], frame) : Value{NoneType{}};
        if (const auto* s = std::get_if<std::string>(&obj)) {
          std::string out;
          for (auto i : slice_indices(static_cast<std::int64_t>(s->size()), lo, hi, st)) out.push_back((*s)[i]);
          return out;
        }
        const std::vector<Value>* items = nullptr;
        if (const auto* l = std::get_if<std::shared_ptr<List>>(&obj)) items = &(*l)->items;
        if (const auto* t = std::get_if<std::shared_ptr<Tuple>>(&obj)) items = &(*t)->items;
        if (!items) throw PyError("TypeError", "'" + type_name(obj) + "' object is not subscriptable");
        std::vector<Value> out;
        for (auto i : slice_indices(static_cast<std::int64_t>(items->size()), lo, hi, st)) {
          out.push_back((*items)[static_cast<std::size_t>(i)]);
        }
        return std::holds_alternative<std::shared_ptr<List>>(obj) ? make_list(std::move(out))
                                                                  : make_tuple(std::move(out));
      }
      return get_item(obj, eval(index, frame));
    }
    case ExprKind::Slice:
      throw PyError("SyntaxError", "slice outside subscript");
    case ExprKind::Attribute:
      return get_attr(eval(*e.children[0], frame), e.name);
    case ExprKind::Lambda: {
      auto fn = std::make_shared<Function>();
      fn->name = "<lambda>";
      fn->params = &e.params;
      fn->lambda_body = e.children[0].get();
      fn->closure = frame.env;
      fn->module = frame.module;
      for (const auto& p : e.params) {
        fn->has_default.push_back(p.default_value != nullptr);
        fn->defaults.push_back(p.default_value ? eval(*p.default_value, frame) : Value{NoneType{}});
      }
      return fn;
    }
  }
  throw PyError("SystemError", "unknown expression");
}

Value Interpreter::eval_compare(const Expr& e, Frame& frame) {
  Value left = eval(*e.children[0], frame);
  for (std::size_t i = 0; i < e.ops.size(); ++i) {
    Value right = eval(*e.children[i + 1], frame);
    if (!compare_op(e.ops[i], left, right)) return false;
    left = std::move(right);
  }
  return true;
}

Value Interpreter::eval_call(const Expr& e, Frame& frame) {
  Value callee = eval(*e.children[0], frame);
  std::vector<Value> args;
  for (std::size_t i = 1; i < e.children.size(); ++i) args.push_back(eval(*e.children[i], frame));
  Kwargs kwargs;
  for (const auto& [name, expr] : e.kwargs) kwargs.emplace_back(name, eval(*expr, frame));
  return call(callee, std::move(args), std::move(kwargs));
}

Value Interpreter::eval_list_comp(const Expr& e, Frame& frame) {
  auto env = std::make_shared<Env>();
  env->parent = frame.env;
  Frame inner{env, frame.module, NoneType{}, frame.is_function};
  auto out = std::make_shared<List>();
  comp_loop(e, 0, inner, *out);
  return out;
}

void Interpreter::comp_loop(const Expr& e, std::size_t level, Frame& frame, List& out) {
  if (level == e.comps.size()) {
    out.items.push_back(eval(*e.children[0], frame));
    if (static_cast<std::int64_t>(out.items.size()) > limits_.max_sequence) {
      throw PyError("MemoryError", "sequence too large");
    }
    return;
  }
  const Comprehension& c = e.comps[level];
  for (const auto& item : iterate(eval(*c.iter, frame))) {
    if (++steps_ > limits_.max_steps) throw PyError("TimeoutError", "step budget exhausted (possible infinite loop)");
    assign(*c.target, item, frame);
    bool keep = true;
    for (const auto& cond : c.conditions) {
      if (!truthy(eval(*cond, frame))) {
        keep = false;
        break;
      }
    }
    if (keep) comp_loop(e, level + 1, frame, out);
  }
}

// ---------------------------------------------------------------------------
// Modules and test execution
// ---------------------------------------------------------------------------

std::shared_ptr<ModuleObject> Interpreter::import_module(const std::string& name) {
  if (auto it = modules_.find(name); it != modules_.end()) return it->second;
  std::string file = name;
  std::replace(file.begin(), file.end(), '.', '/');
  file += ".py";
  if (!std::filesystem::exists(root_ / file)) {
    throw PyError("ModuleNotFoundError", "No module named '" + name + "'");
  }
  return load_module(name, file);
}

std::shared_ptr<ModuleObject> Interpreter::load_module(const std::string& name, const std::string& file) {
  std::ifstream in(root_ / file, std::ios::binary);
  if (!in) throw PyError("OSError", "cannot read " + file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::shared_ptr<Module> ast;
  try {
    ast = parse_module(file, buffer.str());
  } catch (const SyntaxError& e) {
    PyError err("SyntaxError", std::string(e.what()) + " (" + file + ", line " + std::to_string(e.line()) + ")");
    err.file = file;
    err.line = e.line();
    throw err;
  }
  auto module = std::make_shared<ModuleObject>();
  module->name = name;
  module->file = file;
  module->subject = subject_files_.contains(file);
  module->ast = ast;
  module->globals = std::make_shared<Env>();
  module->globals->vars["__name__"] = name;
  modules_[name] = module;
  Frame frame{module->globals, module, NoneType{}, false};
  try {
    exec_block(ast->body, frame);
  } catch (...) {
    modules_.erase(name);
    throw;
  }
  return module;
}

std::vector<TestResult> Interpreter::run_test_file(const std::string& relative_path) {
  std::ifstream in(root_ / relative_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read test file " + relative_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto ast = parse_module(relative_path, buffer.str());

  std::vector<std::string> names;
  for (const auto& stmt : ast->body) {
    if (stmt->kind == StmtKind::Def && stmt->name.starts_with("test") &&
        std::find(names.begin(), names.end(), stmt->name) == names.end()) {
      names.push_back(stmt->name);
    }
  }

  std::string module_name = relative_path.substr(0, relative_path.size() - 3);
  std::replace(module_name.begin(), module_name.end(), '/', '.');

  std::vector<TestResult> results;
  std::shared_ptr<ModuleObject> module;
  steps_ = 0;
  depth_ = 0;
  try {
    module = load_module(module_name, relative_path);
  } catch (const PyError& e) {
    for (const auto& n : names) {
      TestResult r;
      r.name = n;
      r.verdict = TestVerdict::Error;
      r.message = "collection error: " + std::string(e.what());
      results.push_back(std::move(r));
    }
    return results;
  }

  for (const auto& n : names) {
    TestResult r;
    r.name = n;
    stdout_.clear();
    stderr_.clear();
    steps_ = 0;
    depth_ = 0;
    coverage_ = &r.covered;
    try {
      call(module->globals->vars.at(n), {});
    } catch (const PyError& e) {
      r.verdict = e.type() == "AssertionError" ? TestVerdict::Fail : TestVerdict::Error;
      r.message = e.type() + ": " + e.message();
      if (r.verdict == TestVerdict::Error && !e.file.empty()) {
        r.message += "\n  File \"" + e.file + "\", line " + std::to_string(e.line);
      }
    }
    coverage_ = nullptr;
    r.stdout_text = stdout_;
    r.stderr_text = stderr_;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace minipy
