// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "interpreter.hpp"

namespace minipy {
namespace {

bool is_int_like(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<bool>(v);
}

std::int64_t to_int(const Value& v, const char* fn) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? 1 : 0;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw PyError("TypeError", std::string(fn) + "() expects an integer");
}

Value list_of(std::vector<Value> items) {
  auto l = std::make_shared<List>();
  l->items = std::move(items);
  return l;
}

Value tuple_of(std::vector<Value> items) {
  auto t = std::make_shared<Tuple>();
  t->items = std::move(items);
  return t;
}

const Value* kwarg(const Kwargs& kwargs, const std::string& name) {
  for (const auto& [k, v] : kwargs) {
    if (k == name) return &v;
  }
  return nullptr;
}

void no_kwargs(const char* fn, const Kwargs& kwargs) {
  if (!kwargs.empty()) throw PyError("TypeError", std::string(fn) + "() takes no keyword arguments");
}

std::shared_ptr<ModuleObject> builtin_module(const std::string& name) {
  auto m = std::make_shared<ModuleObject>();
  m->name = name;
  m->globals = std::make_shared<Env>();
  return m;
}

}  // namespace

void Interpreter::install_builtins() {
  auto def = [this](const std::string& name, std::function<Value(Interpreter&, std::vector<Value>&, Kwargs&)> fn) {
    auto b = std::make_shared<Builtin>();
    b->name = name;
    b->fn = std::move(fn);
    builtins_[name] = b;
  };

  def("print", [](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    std::string sep = " ", end = "\n";
    bool to_stderr = false;
    if (const auto* v = kwarg(kwargs, "sep"); v && std::holds_alternative<std::string>(*v)) sep = std::get<std::string>(*v);
    if (const auto* v = kwarg(kwargs, "end"); v && std::holds_alternative<std::string>(*v)) end = std::get<std::string>(*v);
    if (const auto* v = kwarg(kwargs, "file")) {
      if (const auto* s = std::get_if<std::shared_ptr<Stream>>(v)) to_stderr = (*s)->is_stderr;
    }
    std::string line;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) line += sep;
      line += in.str(args[i]);
    }
    in.out_stream(to_stderr) += line + end;
    return NoneType{};
  });

  def("len", [](Interpreter&, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    no_kwargs("len", kwargs);
    if (args.size() != 1) throw PyError("TypeError", "len() takes exactly one argument");
    const Value& v = args[0];
    if (const auto* s = std::get_if<std::string>(&v)) return static_cast<std::int64_t>(s->size());
    if (const auto* l = std::get_if<std::shared_ptr<List>>(&v)) return static_cast<std::int64_t>((*l)->items.size());
    if (const auto* t = std::get_if<std::shared_ptr<Tuple>>(&v)) return static_cast<std::int64_t>((*t)->items.size());
    if (const auto* d = std::get_if<std::shared_ptr<Dict>>(&v)) return static_cast<std::int64_t>((*d)->items.size());
    throw PyError("TypeError", "object has no len()");
  });

  def("range", [](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    no_kwargs("range", kwargs);
    if (args.empty() || args.size() > 3) throw PyError("TypeError", "range expected 1 to 3 arguments");
    std::int64_t start = 0, stop = 0, step = 1;
    if (args.size() == 1) {
      stop = to_int(args[0], "range");
    } else {
      start = to_int(args[0], "range");
      stop = to_int(args[1], "range");
      if (args.size() == 3) step = to_int(args[2], "range");
    }
    if (step == 0) throw PyError("ValueError", "range() arg 3 must not be zero");
    std::int64_t count = step > 0 ? (stop > start ? (stop - start + step - 1) / step : 0)
                                  : (start > stop ? (start - stop - step - 1) / (-step) : 0);
    if (count > in.limits().max_sequence) throw PyError("MemoryError", "range too large");
    std::vector<Value> items;
    items.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) items.emplace_back(start + k * step);
    return list_of(std::move(items));
  });

  def("str", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    return args.empty() ? std::string() : in.str(args[0]);
  });
  def("repr", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.size() != 1) throw PyError("TypeError", "repr() takes exactly one argument");
    return in.repr(args[0]);
  });

  def("int", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.empty()) return std::int64_t{0};
    const Value& v = args[0];
    if (is_int_like(v)) return to_int(v, "int");
    if (const auto* d = std::get_if<double>(&v)) {
      if (!std::isfinite(*d)) throw PyError("ValueError", "cannot convert float to integer");
      return static_cast<std::int64_t>(std::trunc(*d));
    }
    if (const auto* s = std::get_if<std::string>(&v)) {
      std::string t = *s;
      t.erase(0, t.find_first_not_of(" \t\n"));
      t.erase(t.find_last_not_of(" \t\n") + 1);
      char* end = nullptr;
      long long r = std::strtoll(t.c_str(), &end, 10);
      if (t.empty() || *end != '\0') {
        throw PyError("ValueError", "invalid literal for int() with base 10: " + in.repr(v));
      }
      return static_cast<std::int64_t>(r);
    }
    throw PyError("TypeError", "int() argument must be a string or a number");
  });

  def("float", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.empty()) return 0.0;
    const Value& v = args[0];
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (is_int_like(v)) return static_cast<double>(to_int(v, "float"));
    if (const auto* s = std::get_if<std::string>(&v)) {
      char* end = nullptr;
      double r = std::strtod(s->c_str(), &end);
      if (s->empty() || *end != '\0') throw PyError("ValueError", "could not convert string to float: " + in.repr(v));
      return r;
    }
    throw PyError("TypeError", "float() argument must be a string or a number");
  });

  def("bool", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    return !args.empty() && in.truthy(args[0]);
  });

  def("abs", [](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.size() != 1) throw PyError("TypeError", "abs() takes exactly one argument");
    if (const auto* d = std::get_if<double>(&args[0])) return std::fabs(*d);
    std::int64_t i = to_int(args[0], "abs");
    return i < 0 ? -i : i;
  });

  auto extreme = [](bool want_max) {
    return [want_max](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
      const char* name = want_max ? "max" : "min";
      std::vector<Value> items = args.size() == 1 ? in.iterate(args[0]) : args;
      const Value* key = kwarg(kwargs, "key");
      if (items.empty()) {
        if (const auto* d = kwarg(kwargs, "default")) return *d;
        throw PyError("ValueError", std::string(name) + "() arg is an empty sequence");
      }
      Value best = items[0];
      Value best_key = key ? in.call(*key, {best}) : best;
      for (std::size_t i = 1; i < items.size(); ++i) {
        Value k = key ? in.call(*key, {items[i]}) : items[i];
        int c = in.compare(k, best_key);
        if (want_max ? c > 0 : c < 0) {
          best = items[i];
          best_key = k;
        }
      }
      return best;
    };
  };
  def("max", extreme(true));
  def("min", extreme(false));

  def("sum", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.empty() || args.size() > 2) throw PyError("TypeError", "sum() takes 1 or 2 arguments");
    Value total = args.size() == 2 ? args[1] : Value{std::int64_t{0}};
    for (const auto& v : in.iterate(args[0])) {
      if (!is_int_like(v) && !std::holds_alternative<double>(v)) {
        throw PyError("TypeError", "unsupported operand type(s) for +: 'int' and '" + in.repr(v) + "'");
      }
      if (std::holds_alternative<double>(total) || std::holds_alternative<double>(v)) {
        double a = std::holds_alternative<double>(total) ? std::get<double>(total) : static_cast<double>(to_int(total, "sum"));
        double b = std::holds_alternative<double>(v) ? std::get<double>(v) : static_cast<double>(to_int(v, "sum"));
        total = a + b;
      } else {
        std::int64_t r = 0;
        if (__builtin_add_overflow(to_int(total, "sum"), to_int(v, "sum"), &r)) {
          throw PyError("OverflowError", "integer result too large for this interpreter");
        }
        total = r;
      }
    }
    return total;
  });

  def("sorted", [](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    if (args.size() != 1) throw PyError("TypeError", "sorted expected 1 argument");
    std::vector<Value> items = in.iterate(args[0]);
    const Value* key = kwarg(kwargs, "key");
    bool reverse = false;
    if (const auto* r = kwarg(kwargs, "reverse")) reverse = in.truthy(*r);
    std::vector<std::pair<Value, Value>> keyed;
    keyed.reserve(items.size());
    for (auto& v : items) {
      Value k = key && !std::holds_alternative<NoneType>(*key) ? in.call(*key, {v}) : v;
      keyed.emplace_back(std::move(k), std::move(v));
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
      return reverse ? in.compare(b.first, a.first) < 0 : in.compare(a.first, b.first) < 0;
    });
    std::vector<Value> out;
    out.reserve(keyed.size());
    for (auto& kv : keyed) out.push_back(std::move(kv.second));
    return list_of(std::move(out));
  });

  def("reversed", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.size() != 1) throw PyError("TypeError", "reversed expected 1 argument");
    auto items = in.iterate(args[0]);
    std::reverse(items.begin(), items.end());
    return list_of(std::move(items));
  });

  def("enumerate", [](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    if (args.empty() || args.size() > 2) throw PyError("TypeError", "enumerate expected 1 or 2 arguments");
    std::int64_t start = args.size() == 2 ? to_int(args[1], "enumerate") : 0;
    if (const auto* s = kwarg(kwargs, "start")) start = to_int(*s, "enumerate");
    std::vector<Value> out;
    for (auto& v : in.iterate(args[0])) out.push_back(tuple_of({start++, v}));
    return list_of(std::move(out));
  });

  def("zip", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    std::vector<std::vector<Value>> seqs;
    std::size_t n = args.empty() ? 0 : SIZE_MAX;
    for (auto& a : args) {
      seqs.push_back(in.iterate(a));
      n = std::min(n, seqs.back().size());
    }
    std::vector<Value> out;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Value> row;
      for (auto& s : seqs) row.push_back(s[i]);
      out.push_back(tuple_of(std::move(row)));
    }
    return list_of(std::move(out));
  });

  def("list", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    return list_of(args.empty() ? std::vector<Value>{} : in.iterate(args[0]));
  });
  def("tuple", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    return tuple_of(args.empty() ? std::vector<Value>{} : in.iterate(args[0]));
  });
  def("dict", [](Interpreter& in, std::vector<Value>& args, Kwargs& kwargs) -> Value {
    auto d = std::make_shared<Dict>();
    if (!args.empty()) {
      for (auto& pair : in.iterate(args[0])) {
        auto kv = in.iterate(pair);
        if (kv.size() != 2) throw PyError("ValueError", "dictionary update sequence element has wrong length");
        d->items.emplace_back(kv[0], kv[1]);
      }
    }
    for (auto& [k, v] : kwargs) d->items.emplace_back(k, v);
    return d;
  });

  def("any", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    for (auto& v : in.iterate(args.at(0))) {
      if (in.truthy(v)) return true;
    }
    return false;
  });
  def("all", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    for (auto& v : in.iterate(args.at(0))) {
      if (!in.truthy(v)) return false;
    }
    return true;
  });

  def("round", [](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
    if (args.empty()) throw PyError("TypeError", "round() missing required argument");
    if (is_int_like(args[0])) return to_int(args[0], "round");
    double x = std::get<double>(args[0]);
    if (args.size() == 1) {
      if (!std::isfinite(x)) throw PyError("OverflowError", "cannot convert float infinity to integer");
      return static_cast<std::int64_t>(std::nearbyint(x));
    }
    std::int64_t digits = to_int(args[1], "round");
    if (digits < 0) {
      double scale = std::pow(10.0, static_cast<double>(-digits));
      return std::nearbyint(x / scale) * scale;
    }
    // printf rounds the exact binary value half-to-even, as CPython does.
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.*f", static_cast<int>(std::min<std::int64_t>(digits, 300)), x);
    return std::strtod(buf, nullptr);
  });

  def("divmod", [](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
    std::int64_t a = to_int(args.at(0), "divmod"), b = to_int(args.at(1), "divmod");
    if (b == 0) throw PyError("ZeroDivisionError", "integer division or modulo by zero");
    std::int64_t q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) {
      --q;
      r += b;
    }
    return tuple_of({q, r});
  });

  def("ord", [](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
    const auto* s = std::get_if<std::string>(&args.at(0));
    if (!s || s->size() != 1) throw PyError("TypeError", "ord() expected a character");
    return static_cast<std::int64_t>(static_cast<unsigned char>((*s)[0]));
  });
  def("chr", [](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
    std::int64_t c = to_int(args.at(0), "chr");
    if (c < 0 || c > 127) throw PyError("ValueError", "chr() arg out of supported range");
    return std::string(1, static_cast<char>(c));
  });

  def("__import__", [](Interpreter& in, std::vector<Value>& args, Kwargs&) -> Value {
    const auto* name = std::get_if<std::string>(&args.at(0));
    if (!name) throw PyError("TypeError", "__import__() argument must be str");
    return in.import_module(*name);
  });

  auto sys = builtin_module("sys");
  auto out = std::make_shared<Stream>();
  auto err = std::make_shared<Stream>();
  err->is_stderr = true;
  sys->globals->vars["stdout"] = out;
  sys->globals->vars["stderr"] = err;
  sys->globals->vars["maxsize"] = std::int64_t{9223372036854775807LL};
  modules_["sys"] = sys;

  auto math = builtin_module("math");
  auto math_fn = [&](const std::string& name, double (*f)(double)) {
    auto b = std::make_shared<Builtin>();
    b->name = name;
    b->fn = [f, name](Interpreter&, std::vector<Value>& args, Kwargs&) -> Value {
      if (args.size() != 1) throw PyError("TypeError", "math." + name + "() takes exactly one argument");
      double x = is_int_like(args[0]) ? static_cast<double>(to_int(args[0], "math")) : std::get<double>(args[0]);
      double r = f(x);
      if (name == "floor" || name == "ceil") return static_cast<std::int64_t>(r);
      if (std::isnan(r)) throw PyError("ValueError", "math domain error");
      return r;
    };
    math->globals->vars[name] = b;
  };
  math_fn("sqrt", [](double x) { return std::sqrt(x); });
  math_fn("floor", [](double x) { return std::floor(x); });
  math_fn("ceil", [](double x) { return std::ceil(x); });
  math->globals->vars["inf"] = HUGE_VAL;
  math->globals->vars["pi"] = 3.141592653589793;
  modules_["math"] = math;
}

}  // namespace minipy
