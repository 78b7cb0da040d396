// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "codehinter/util.hpp"

namespace codehinter::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return CODEHINTER_SOURCE_DIR; }
fs::path corpus_dir() { return source_dir() / "exercises"; }
fs::path fixtures_dir() { return source_dir() / "tests" / "fixtures"; }

void use_built_stub_adapter() { ::setenv("CODEHINTER_STUB_ADAPTER", CODEHINTER_STUB_ADAPTER_PATH, 0); }

ProcessResult run_cli(const std::vector<std::string>& args, const fs::path& cwd) {
  use_built_stub_adapter();
  std::vector<std::string> argv{CODEHINTER_CLI_PATH};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessOptions options;
  options.cwd = cwd.empty() ? fs::current_path() : cwd;
  options.timeout = std::chrono::milliseconds(120'000);
  options.max_output = 1 << 20;
  return run_process(argv, options);
}

runner::ProjectConfig write_project(const fs::path& root, const std::map<std::string, std::string>& files,
                                    const std::vector<std::string>& subjects) {
  for (const auto& [name, text] : files) {
    fs::create_directories((root / name).parent_path());
    write_file(root / name, text);
  }
  runner::ProjectConfig config;
  config.root = root;
  config.subject_files = subjects;
  return config;
}

TestRecord record(const std::string& id, Outcome outcome, std::vector<SourceLocation> covered) {
  std::sort(covered.begin(), covered.end());
  covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
  TestRecord r;
  r.test_id = id;
  r.outcome = outcome;
  if (outcome != Outcome::Pass) r.message = "assert 1 == 2";
  r.covered = std::move(covered);
  return r;
}

CoverageSpectrum random_spectrum(std::mt19937_64& rng, int max_tests, int max_lines) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  CoverageSpectrum s;
  s.subject_files = {"a.py"};
  if (uniform(0, 1) == 1) s.subject_files.push_back("pkg/b.py");
  int tests = uniform(1, max_tests);
  int lines = uniform(1, max_lines);
  for (int t = 0; t < tests; ++t) {
    std::vector<SourceLocation> covered;
    for (int l = 1; l <= lines; ++l) {
      if (uniform(0, 2) > 0) covered.push_back({s.subject_files[static_cast<std::size_t>(uniform(0, 10)) % s.subject_files.size()], l});
    }
    Outcome outcome = uniform(0, 2) == 0 ? Outcome::Pass : (uniform(0, 3) == 0 ? Outcome::Error : Outcome::Fail);
    s.records.push_back(record("t" + std::to_string(t), outcome, covered));
  }
  return s;
}

double oracle_score(long ef, long ep, long nf, long np, spectrum::Formula formula) {
  const double F = static_cast<double>(ef + nf);
  const double P = static_cast<double>(ep + np);
  switch (formula) {
    case spectrum::Formula::Tarantula: {
      if (ef == 0 || F == 0) return 0.0;
      double fail_ratio = ef / F;
      double pass_ratio = P == 0 ? 0.0 : ep / P;
      return fail_ratio / (fail_ratio + pass_ratio);
    }
    case spectrum::Formula::Ochiai: {
      double d = std::sqrt(F * static_cast<double>(ef + ep));
      return d == 0 ? 0.0 : ef / d;
    }
    case spectrum::Formula::DStar2: {
      if (ef == 0) return 0.0;
      if (ep + nf == 0) return std::numeric_limits<double>::infinity();
      return static_cast<double>(ef) * static_cast<double>(ef) / static_cast<double>(ep + nf);
    }
    case spectrum::Formula::Op2: return ef - ep / (P + 1.0);
  }
  return 0.0;
}

std::vector<OracleEntry> oracle_rank(const CoverageSpectrum& spectrum, spectrum::Formula formula) {
  std::set<SourceLocation> lines;
  for (const auto& r : spectrum.records) lines.insert(r.covered.begin(), r.covered.end());

  std::vector<OracleEntry> out;
  for (const auto& loc : lines) {
    long ef = 0, ep = 0, nf = 0, np = 0;
    for (const auto& r : spectrum.records) {
      bool hit = std::find(r.covered.begin(), r.covered.end(), loc) != r.covered.end();
      bool failed = r.outcome != Outcome::Pass;
      if (hit && failed) ++ef;
      if (hit && !failed) ++ep;
      if (!hit && failed) ++nf;
      if (!hit && !failed) ++np;
    }
    out.push_back({loc, oracle_score(ef, ep, nf, np, formula)});
  }
  double max_finite = 0.0;
  bool any_finite = false;
  for (const auto& e : out) {
    if (std::isfinite(e.score)) {
      max_finite = any_finite ? std::max(max_finite, e.score) : e.score;
      any_finite = true;
    }
  }
  for (auto& e : out) {
    if (!std::isfinite(e.score)) e.score = (any_finite ? max_finite : 0.0) + 1.0;
  }
  // Selection sort keeps this independent of the library's ordering.
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t best = i;
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      bool better = out[j].score > out[best].score ||
                    (out[j].score == out[best].score && out[j].location < out[best].location);
      if (better) best = j;
    }
    std::swap(out[i], out[best]);
  }
  return out;
}

trace::TraceFile random_trace(std::mt19937_64& rng) {
  trace::TraceFile t;
  t.created_at = "2026-03-0" + std::to_string(std::uniform_int_distribution<int>(1, 9)(rng)) + "T10:00:00Z";
  t.adapter = "gen";
  t.spectrum.subject_files = {"a.py", "b.py"};
  std::vector<int> ids{0, 1, 2, 3, 4, 5};
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 6)(rng)));
  for (int id : ids) {
    std::vector<SourceLocation> cov;
    for (int l = 1; l <= 4; ++l) {
      if (std::uniform_int_distribution<int>(0, 1)(rng)) cov.push_back({l % 2 ? "a.py" : "b.py", l});
    }
    auto outcome = static_cast<Outcome>(std::uniform_int_distribution<int>(0, 2)(rng));
    t.spectrum.records.push_back(record("t" + std::to_string(id), outcome, cov));
  }
  return t;
}

}  // namespace codehinter::testing
