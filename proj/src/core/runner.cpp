// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "codehinter/error.hpp"
#include "codehinter/process.hpp"
#include "codehinter/util.hpp"

namespace codehinter::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::ConfigInvalid, message); }

std::string stub_adapter_path() {
  if (const char* env = std::getenv("CODEHINTER_STUB_ADAPTER"); env && *env) return env;
  fs::path exe = current_executable();
  if (!exe.empty()) {
    fs::path sibling = exe.parent_path() / kStubAdapter;
    std::error_code ec;
    if (fs::is_regular_file(sibling, ec)) return sibling.string();
  }
  return std::string(kStubAdapter);
}

std::string replace_all(std::string text, std::string_view from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string tail(const std::string& text, std::size_t n = 2000) {
  return text.size() > n ? text.substr(text.size() - n) : text;
}

std::vector<DebugLine> read_debug_stream(const fs::path& path) {
  std::vector<DebugLine> lines;
  std::error_code ec;
  if (!fs::exists(path, ec)) return lines;
  std::istringstream in(read_file(path));
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    json j = json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("test_id") || !j.contains("text")) {
      throw Error(ErrorCode::TraceInvalid, "malformed debug stream line: " + raw.substr(0, 200));
    }
    std::istringstream text(j["text"].get<std::string>());
    std::string line;
    while (std::getline(text, line)) lines.push_back({j["test_id"].get<std::string>(), line});
  }
  return lines;
}

}  // namespace

void validate_config(const ProjectConfig& config) {
  std::error_code ec;
  if (config.root.empty() || !fs::is_directory(config.root, ec)) {
    invalid("project root is not a directory: '" + config.root.string() + "'");
  }
  if (config.subject_files.empty()) invalid("subject_files must not be empty");
  for (const auto& f : config.subject_files) {
    if (!is_normalized_path(f)) invalid("subject file is not a normalized relative path: '" + f + "'");
  }
  if (!(config.timeout_seconds > 0) || !std::isfinite(config.timeout_seconds)) invalid("timeout must be > 0");
  if (config.exercise && config.exercise->max_buggy_lines < 1) invalid("max_buggy_lines must be >= 1");
}

ProjectConfig config_from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) invalid("config must be a JSON object");
  static const std::vector<std::string> kKeys = {"root", "subject_files", "adapter_command", "timeout", "exercise"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) invalid("unknown config field '" + key + "'");
  }
  ProjectConfig config;
  try {
    fs::path root = j.at("root").get<std::string>();
    config.root = root.is_relative() && !base.empty() ? (base / root).lexically_normal() : root;
    if (config.root.has_parent_path() && !config.root.has_filename()) config.root = config.root.parent_path();
    config.subject_files = j.at("subject_files").get<std::vector<std::string>>();
    if (j.contains("adapter_command")) config.adapter_command = j["adapter_command"].get<std::vector<std::string>>();
    if (j.contains("timeout")) config.timeout_seconds = j["timeout"].get<double>();
    if (j.contains("exercise") && !j["exercise"].is_null()) {
      const json& e = j["exercise"];
      ExerciseSpec spec;
      spec.statement = e.at("statement").get<std::string>();
      if (e.contains("reference_solution") && !e["reference_solution"].is_null()) {
        spec.reference_solution = e["reference_solution"].get<std::map<std::string, std::string>>();
      }
      if (e.contains("max_buggy_lines")) spec.max_buggy_lines = e["max_buggy_lines"].get<int>();
      config.exercise = std::move(spec);
    }
  } catch (const json::exception& e) {
    invalid(std::string("malformed config: ") + e.what());
  }
  validate_config(config);
  return config;
}

json to_json(const ProjectConfig& config) {
  json j = {{"root", config.root.string()},
            {"subject_files", config.subject_files},
            {"adapter_command", config.adapter_command},
            {"timeout", config.timeout_seconds},
            {"exercise", nullptr}};
  if (config.exercise) {
    j["exercise"] = {{"statement", config.exercise->statement},
                     {"reference_solution", config.exercise->reference_solution
                                                ? json(*config.exercise->reference_solution)
                                                : json(nullptr)},
                     {"max_buggy_lines", config.exercise->max_buggy_lines}};
  }
  return j;
}

ProjectConfig load_project_config(const fs::path& dir) {
  fs::path file = dir / kConfigFileName;
  std::error_code ec;
  if (!fs::is_regular_file(file, ec)) invalid("no " + std::string(kConfigFileName) + " in " + dir.string());
  json j = json::parse(read_file(file), nullptr, false);
  if (j.is_discarded()) invalid(file.string() + " is not valid JSON");
  return config_from_json(j, fs::absolute(dir));
}

std::vector<std::string> expand_command(const ProjectConfig& config, const fs::path& root, const fs::path& trace_out) {
  std::vector<std::string> argv;
  if (config.adapter_command.empty()) {
    argv = {stub_adapter_path(), "--root", root.string(), "--out", trace_out.string()};
    for (const auto& f : config.subject_files) {
      argv.push_back("--subject");
      argv.push_back(f);
    }
    return argv;
  }
  for (const auto& arg : config.adapter_command) {
    argv.push_back(replace_all(replace_all(arg, "{TRACE_OUT}", trace_out.string()), "{PROJECT_ROOT}", root.string()));
  }
  if (argv[0] == kStubAdapter) argv[0] = stub_adapter_path();
  return argv;
}

std::string SourceSnapshot::hash() const {
  std::string material;
  for (const auto& [file, snap] : files) material += file + '\0' + snap.hash + '\n';
  return sha256_hex(material);
}

const std::string& SourceSnapshot::content(const std::string& file) const {
  auto it = files.find(file);
  if (it == files.end()) throw Error(ErrorCode::IoError, "'" + file + "' is not in the snapshot", {{"file", file}});
  return it->second.content;
}

SourceSnapshot make_snapshot(const std::map<std::string, std::string>& contents) {
  SourceSnapshot snap;
  for (const auto& [file, text] : contents) snap.files[file] = {text, sha256_hex(text)};
  return snap;
}

SourceSnapshot snapshot_source(const ProjectConfig& config) {
  std::map<std::string, std::string> contents;
  for (const auto& f : config.subject_files) {
    try {
      contents[f] = read_file(config.root / f);
    } catch (const Error&) {
      throw Error(ErrorCode::IoError, "cannot read subject file '" + f + "'", {{"file", f}});
    }
  }
  return make_snapshot(contents);
}

AdapterRun run_adapter(const ProjectConfig& config, const fs::path& root, bool capture_debug) {
  TempDir scratch("codehinter-run");
  fs::path trace_out = scratch.path() / "trace.json";
  fs::path debug_out = scratch.path() / "debug.jsonl";

  ProcessOptions options;
  options.cwd = root;
  options.timeout = std::chrono::milliseconds(static_cast<long long>(config.timeout_seconds * 1000.0));
  if (capture_debug) options.extra_env["CODEHINTER_DEBUG_OUT"] = debug_out.string();

  auto argv = expand_command(config, fs::absolute(root), trace_out);
  ProcessResult proc = run_process(argv, options);
  if (proc.timed_out) {
    throw Error(ErrorCode::Timeout, "adapter exceeded " + std::to_string(config.timeout_seconds) + " s",
                {{"timeout", config.timeout_seconds}});
  }
  std::error_code ec;
  if (proc.exit_code != 0) {
    throw Error(ErrorCode::AdapterFailure, "adapter exited with status " + std::to_string(proc.exit_code),
                {{"exit_code", proc.exit_code}, {"output", tail(proc.output)}});
  }
  if (!fs::exists(trace_out, ec)) {
    throw Error(ErrorCode::AdapterFailure, "adapter exited 0 without writing a trace", {{"output", tail(proc.output)}});
  }

  AdapterRun run;
  try {
    run.spectrum = trace::parse_trace(read_file(trace_out)).spectrum;
  } catch (const Error& e) {
    throw Error(ErrorCode::TraceInvalid, std::string("adapter wrote an invalid trace: ") + e.what(),
                {{"cause", error_code_name(e.code())}, {"details", e.details()}});
  }
  auto expected = config.subject_files;
  auto actual = run.spectrum.subject_files;
  std::sort(expected.begin(), expected.end());
  std::sort(actual.begin(), actual.end());
  if (expected != actual) {
    throw Error(ErrorCode::TraceInvalid, "trace subject_files do not match the project configuration",
                {{"expected", expected}, {"actual", actual}});
  }
  if (capture_debug) run.debug = read_debug_stream(debug_out);
  return run;
}

RunResult run_end_to_end(const ProjectConfig& config) {
  validate_config(config);
  RunResult result;
  result.snapshot = snapshot_source(config);
  result.spectrum = run_adapter(config, config.root).spectrum;
  result.report = trace::summarize(result.spectrum);
  return result;
}

void write_shadow_copy(const ProjectConfig& config, const fs::path& dest,
                       const std::map<std::string, std::string>& overrides) {
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(config.root, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    const fs::path& src = it->path();
    std::string name = src.filename().string();
    if (it->is_directory() && (name.starts_with(".") || name == "__pycache__")) {
      it.disable_recursion_pending();
      continue;
    }
    fs::path target = dest / fs::relative(src, config.root);
    if (it->is_directory()) {
      fs::create_directories(target);
    } else if (it->is_regular_file()) {
      fs::create_directories(target.parent_path());
      fs::copy_file(src, target, fs::copy_options::overwrite_existing);
    }
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot copy project: " + ec.message());
  for (const auto& [file, text] : overrides) {
    fs::create_directories((dest / file).parent_path());
    write_file(dest / file, text);
  }
}

}  // namespace codehinter::runner
