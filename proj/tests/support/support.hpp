// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit and acceptance tests, plus an independent
// brute-force re-derivation of suspiciousness rankings.

#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "codehinter/coverage.hpp"
#include "codehinter/process.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/spectrum.hpp"
#include "codehinter/trace.hpp"

namespace codehinter::testing {

std::filesystem::path source_dir();
std::filesystem::path corpus_dir();
std::filesystem::path fixtures_dir();

/// Points CODEHINTER_STUB_ADAPTER at the built adapter unless already set.
void use_built_stub_adapter();

/// Runs the built CLI with `args`; output is stdout and stderr combined.
ProcessResult run_cli(const std::vector<std::string>& args, const std::filesystem::path& cwd = {});

/// Writes `files` under `root` and returns a config over `subjects`.
runner::ProjectConfig write_project(const std::filesystem::path& root, const std::map<std::string, std::string>& files,
                                    const std::vector<std::string>& subjects);

TestRecord record(const std::string& id, Outcome outcome, std::vector<SourceLocation> covered);

/// Up to `max_tests` tests over lines 1..max_lines of one or two files.
CoverageSpectrum random_spectrum(std::mt19937_64& rng, int max_tests = 6, int max_lines = 10);

/// Up to six records over two subject files, with a random created_at.
trace::TraceFile random_trace(std::mt19937_64& rng);

/// Counts, scores and order recomputed from first principles.
struct OracleEntry {
  SourceLocation location;
  double score = 0.0;
};
std::vector<OracleEntry> oracle_rank(const CoverageSpectrum& spectrum, spectrum::Formula formula);

/// Scores straight from the textbook definitions; +infinity for the DStar2
/// sentinel case.
double oracle_score(long ef, long ep, long nf, long np, spectrum::Formula formula);

}  // namespace codehinter::testing
