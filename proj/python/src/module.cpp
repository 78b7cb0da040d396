// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings. Structured values cross the boundary as JSON text; the
// package wrapper turns them into Python objects.

#include <memory>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "codehinter/corpus.hpp"
#include "codehinter/error.hpp"
#include "codehinter/provider.hpp"
#include "codehinter/spectrum.hpp"
#include "codehinter/trace.hpp"
#include "codehinter/workbench.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using nlohmann::json;

namespace codehinter {
namespace {

std::string dump(const json& j) { return j.dump(); }

json load(const std::string& text) { return json::parse(text); }

// Long-running calls release the GIL; results are converted after.
template <typename F>
std::string unlocked(F&& f) {
  json out;
  {
    py::gil_scoped_release release;
    out = f();
  }
  return dump(out);
}

std::shared_ptr<assist::SuggestionProvider> make_provider(const std::string& name) {
  if (name == "stub") return std::make_shared<assist::StubProvider>();
  if (name == "env") return assist::provider_from_env();
  throw Error(ErrorCode::BadRequest, "unknown provider '" + name + "' (expected stub or env)");
}

}  // namespace
}  // namespace codehinter

PYBIND11_MODULE(_core, m) {
  using namespace codehinter;
  m.doc() = "codehinter core bindings";
  m.attr("__version__") = std::string(kVersion);

  static py::handle error_type = py::exception<Error>(m, "CodeHinterError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(std::string(e.what()));
      inst.attr("code") = std::string(error_code_name(e.code()));
      inst.attr("details") = e.details().dump();
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  m.def("score", [](long ef, long ep, long nf, long np, const std::string& formula) {
    return spectrum::score({ef, ep, nf, np}, spectrum::parse_formula(formula));
  }, py::arg("ef"), py::arg("ep"), py::arg("nf"), py::arg("np"), py::arg("formula") = "ochiai");

  m.def("rank", [](const std::string& spectrum_json, const std::string& formula) {
    auto s = trace::spectrum_from_json(load(spectrum_json));
    return dump(spectrum::to_json(spectrum::rank(s, spectrum::parse_formula(formula))));
  }, py::arg("spectrum"), py::arg("formula") = "ochiai");

  m.def("parse_trace", [](const std::string& bytes) { return dump(trace::to_json(trace::parse_trace(bytes))); });
  m.def("canonical_trace", [](const std::string& bytes) { return trace::serialize_trace(trace::parse_trace(bytes)); });
  m.def("merge_traces", [](const std::string& a, const std::string& b) {
    return trace::serialize_trace(trace::merge_traces(trace::parse_trace(a), trace::parse_trace(b)));
  });

  m.def("corpus_ids", [](const fs::path& dir, bool verify) {
    std::vector<std::string> ids;
    {
      py::gil_scoped_release release;
      for (const auto& ex : corpus::load_corpus(dir, verify ? corpus::Verify::Full : corpus::Verify::Structure)) {
        ids.push_back(ex.id);
      }
    }
    return ids;
  }, py::arg("dir"), py::arg("verify") = false);

  m.def("materialize", [](const fs::path& exercise_dir, const std::string& variant, const fs::path& dest) {
    return dump(runner::to_json(corpus::materialize(corpus::load_exercise(exercise_dir), variant, dest)));
  }, py::arg("exercise_dir"), py::arg("variant"), py::arg("dest"));

  py::class_<Workbench>(m, "Workbench")
      .def(py::init([](const fs::path& data_dir, const std::string& provider) {
             fs::create_directories(data_dir);
             return std::make_unique<Workbench>(data_dir, make_provider(provider));
           }),
           py::arg("data_dir"), py::arg("provider") = "stub")
      .def("create_session", [](Workbench& wb, const fs::path& project) {
        return wb.create_session(runner::load_project_config(project));
      })
      .def("sessions", [](Workbench& wb) { return wb.store().list(); })
      .def("view", [](Workbench& wb, const std::string& id) { return dump(wb.view(id)); })
      .def("run_e2e", [](Workbench& wb, const std::string& id) { return unlocked([&] { return wb.run_e2e(id); }); })
      .def("locate", [](Workbench& wb, const std::string& id, const std::string& formula, std::size_t top) {
        auto f = spectrum::parse_formula(formula);
        return unlocked([&] { return wb.locate(id, f, top); });
      }, py::arg("id"), py::arg("formula") = "ochiai", py::arg("top") = spectrum::kDefaultTopK)
      .def("quiz", [](Workbench& wb, const std::string& id) { return unlocked([&] { return wb.quiz(id); }); })
      .def("answer", [](Workbench& wb, const std::string& id, int choice) { return dump(wb.answer(id, choice)); })
      .def("prints", [](Workbench& wb, const std::string& id) { return unlocked([&] { return wb.prints(id); }); })
      .def("run_prints", [](Workbench& wb, const std::string& id) { return unlocked([&] { return wb.run_prints(id); }); })
      .def("apply_patch", [](Workbench& wb, const std::string& id, const std::string& body) {
        json b = load(body);
        return unlocked([&] { return wb.apply_patch(id, b); });
      })
      .def("solution", [](Workbench& wb, const std::string& id) { return dump(wb.solution(id)); })
      .def("pseudocode", [](Workbench& wb, const std::string& id, bool record) {
        return dump(wb.pseudocode(id, record));
      }, py::arg("id"), py::arg("record") = true)
      .def("visualizer", [](Workbench& wb, const std::string& id, std::optional<std::string> file, bool record) {
        return dump(wb.visualizer(id, file, record));
      }, py::arg("id"), py::arg("file") = py::none(), py::arg("record") = true)
      .def("chat", [](Workbench& wb, const std::string& id, const std::string& text) {
        return unlocked([&] { return wb.chat(id, text); });
      })
      .def("events", [](Workbench& wb, const std::string& id) { return dump(wb.events(id)); })
      .def("usage", [](Workbench& wb, const std::string& id) { return dump(wb.usage(id)); });
}
