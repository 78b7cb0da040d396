// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codehinter/error.hpp"

namespace codehinter::spectrum {

std::string_view formula_name(Formula formula) {
  switch (formula) {
    case Formula::Tarantula: return "tarantula";
    case Formula::Ochiai: return "ochiai";
    case Formula::DStar2: return "dstar2";
    case Formula::Op2: return "op2";
  }
  return "ochiai";
}

Formula parse_formula(std::string_view name) {
  for (Formula f : {Formula::Tarantula, Formula::Ochiai, Formula::DStar2, Formula::Op2}) {
    if (formula_name(f) == name) return f;
  }
  throw Error(ErrorCode::UnknownFormula,
              "unknown formula '" + std::string(name) + "' (expected tarantula, ochiai, dstar2 or op2)");
}

CountMap derive_counts(const CoverageSpectrum& spectrum) {
  if (spectrum.records.empty()) throw Error(ErrorCode::EmptySpectrum, "spectrum has no tests");

  long failing = 0;
  long passing = 0;
  CountMap counts;
  for (const auto& record : spectrum.records) {
    (record.failing() ? failing : passing) += 1;
    for (const auto& loc : record.covered) {
      validate_location(loc);
      auto& c = counts[loc];
      (record.failing() ? c.ef : c.ep) += 1;
    }
  }
  for (auto& [loc, c] : counts) {
    c.nf = failing - c.ef;
    c.np = passing - c.ep;
  }
  return counts;
}

double score(const ElementCounts& c, Formula formula) {
  if (c.ef < 0 || c.ep < 0 || c.nf < 0 || c.np < 0) {
    throw Error(ErrorCode::PreconditionViolated, "element counts must be non-negative");
  }
  const double ef = static_cast<double>(c.ef);
  const double ep = static_cast<double>(c.ep);
  const double nf = static_cast<double>(c.nf);
  const double failing = static_cast<double>(c.failing_total());
  const double passing = static_cast<double>(c.passing_total());

  switch (formula) {
    case Formula::Tarantula: {
      if (c.ef == 0 || c.failing_total() == 0) return 0.0;
      const double fail_ratio = ef / failing;
      const double pass_ratio = c.passing_total() == 0 ? 0.0 : ep / passing;
      return fail_ratio / (fail_ratio + pass_ratio);
    }
    case Formula::Ochiai: {
      const double denom = std::sqrt(failing * (ef + ep));
      return denom == 0.0 ? 0.0 : ef / denom;
    }
    case Formula::DStar2: {
      if (c.ef == 0) return 0.0;
      if (c.ep + c.nf == 0) return std::numeric_limits<double>::infinity();
      return (ef * ef) / (ep + nf);
    }
    case Formula::Op2:
      return ef - ep / (passing + 1.0);
  }
  throw Error(ErrorCode::UnknownFormula, "unknown formula");
}

SuspiciousnessRanking rank(const CoverageSpectrum& spectrum, Formula formula) {
  auto counts = derive_counts(spectrum);

  SuspiciousnessRanking ranking;
  ranking.formula = formula;
  for (const auto& record : spectrum.records) {
    (record.failing() ? ranking.failing_total : ranking.passing_total) += 1;
  }
  if (ranking.failing_total == 0) {
    throw Error(ErrorCode::NoFailingTests, "cannot rank a spectrum without failing tests");
  }

  ranking.entries.reserve(counts.size());
  for (const auto& [loc, c] : counts) ranking.entries.push_back({loc, score(c, formula)});

  // std::map iteration already yields (file, line) ascending, so a stable
  // sort on score alone keeps the tie-break.
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const RankedLocation& a, const RankedLocation& b) { return a.score > b.score; });

  double max_finite = 0.0;
  bool any_finite = false;
  for (const auto& e : ranking.entries) {
    if (std::isfinite(e.score)) {
      max_finite = any_finite ? std::max(max_finite, e.score) : e.score;
      any_finite = true;
    }
  }
  const double sentinel = (any_finite ? max_finite : 0.0) + 1.0;
  for (auto& e : ranking.entries) {
    if (std::isinf(e.score)) e.score = sentinel;
  }
  return ranking;
}

std::vector<RankedLocation> top_k(const SuspiciousnessRanking& ranking, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::PreconditionViolated, "k must be at least 1");
  const std::size_t n = std::min(k, ranking.entries.size());
  return {ranking.entries.begin(), ranking.entries.begin() + static_cast<std::ptrdiff_t>(n)};
}

nlohmann::json to_json(const SuspiciousnessRanking& ranking) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ranking.entries) {
    entries.push_back({{"file", e.location.file}, {"line", e.location.line}, {"score", e.score}});
  }
  return {{"formula", formula_name(ranking.formula)},
          {"entries", std::move(entries)},
          {"totals", {{"failing", ranking.failing_total}, {"passing", ranking.passing_total}}}};
}

nlohmann::json to_json(const ElementCounts& c) {
  return {{"ef", c.ef}, {"ep", c.ep}, {"nf", c.nf}, {"np", c.np}};
}

}  // namespace codehinter::spectrum
