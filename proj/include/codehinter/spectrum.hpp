// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Spectrum-based fault localization: per-line counts, the suspiciousness
// formulas, and deterministic rankings. Everything here is a pure function.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/coverage.hpp"

namespace codehinter::spectrum {

/// ef/ep: failing/passing tests that execute the element;
/// nf/np: failing/passing tests that do not.
struct ElementCounts {
  long ef = 0;
  long ep = 0;
  long nf = 0;
  long np = 0;

  long failing_total() const { return ef + nf; }
  long passing_total() const { return ep + np; }
  bool operator==(const ElementCounts&) const = default;
};

enum class Formula { Tarantula, Ochiai, DStar2, Op2 };

inline constexpr Formula kDefaultFormula = Formula::Ochiai;
inline constexpr std::size_t kDefaultTopK = 3;

std::string_view formula_name(Formula formula);

/// Throws Error(UnknownFormula).
Formula parse_formula(std::string_view name);

using CountMap = std::map<SourceLocation, ElementCounts>;

/// Counts for every location covered by at least one test.
/// Throws EmptySpectrum when there are no tests and MalformedLocation on a
/// bad path or line.
CountMap derive_counts(const CoverageSpectrum& spectrum);

/// Closed-form suspiciousness. DStar2 returns +infinity when ef > 0 and
/// ep + nf == 0; all other results are finite.
double score(const ElementCounts& counts, Formula formula);

struct RankedLocation {
  SourceLocation location;
  double score = 0.0;
  bool operator==(const RankedLocation&) const = default;
};

struct SuspiciousnessRanking {
  Formula formula = kDefaultFormula;
  std::vector<RankedLocation> entries;  // score desc, then (file, line) asc
  long failing_total = 0;
  long passing_total = 0;
  bool operator==(const SuspiciousnessRanking&) const = default;
};

/// Ranks every covered line. Infinite scores are replaced by the largest
/// finite score plus one. Throws NoFailingTests on an all-green spectrum.
SuspiciousnessRanking rank(const CoverageSpectrum& spectrum, Formula formula = kDefaultFormula);

/// The first min(k, size) entries. k must be at least 1.
std::vector<RankedLocation> top_k(const SuspiciousnessRanking& ranking, std::size_t k = kDefaultTopK);

nlohmann::json to_json(const SuspiciousnessRanking& ranking);
nlohmann::json to_json(const ElementCounts& counts);

}  // namespace codehinter::spectrum
