// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Hand-evaluated suspiciousness scores. F = ef + nf, P = ep + np.
//   Tarantula (ef/F) / (ef/F + ep/P), 0 when ef = 0 or F = 0, ep/P = 0 when P = 0
//   Ochiai    ef / sqrt(F * (ef + ep)), 0 when the denominator is 0
//   DStar2    ef^2 / (ep + nf), +inf when ep + nf = 0 and ef > 0, 0 when ef = 0
//   Op2       ef - ep / (P + 1)

#pragma once

#include <limits>

#include "codehinter/spectrum.hpp"

namespace codehinter::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFormulaTolerance = 1e-9;

struct FormulaCase {
  spectrum::ElementCounts counts;
  double tarantula;
  double ochiai;
  double dstar2;
  double op2;
};

inline constexpr FormulaCase kFormulaCases[] = {
    {{2, 1, 0, 2}, 0.75, 0.816496580928, 4.0, 1.75},
    {{0, 0, 2, 3}, 0.0, 0.0, 0.0, 0.0},  // uncovered element
    {{2, 0, 0, 3}, 1.0, 1.0, kInf, 2.0},  // DStar2 sentinel
    {{1, 1, 1, 1}, 0.5, 0.5, 0.5, 0.666666666667},
    {{3, 0, 0, 0}, 1.0, 1.0, kInf, 3.0},  // P = 0
    {{0, 2, 1, 0}, 0.0, 0.0, 0.0, -0.666666666667},
    {{0, 0, 0, 4}, 0.0, 0.0, 0.0, 0.0},  // F = 0, Ochiai denominator 0
    {{0, 3, 0, 1}, 0.0, 0.0, 0.0, -0.6},  // F = 0
    {{1, 4, 0, 0}, 0.5, 0.447213595500, 0.25, 0.2},
    {{1, 0, 3, 2}, 1.0, 0.5, 0.333333333333, 1.0},
    {{4, 2, 1, 6}, 0.761904761905, 0.730296743340, 5.333333333333, 3.777777777778},
    {{5, 5, 0, 0}, 0.5, 0.707106781187, 5.0, 4.166666666667},
    {{1, 0, 0, 0}, 1.0, 1.0, kInf, 1.0},
    {{0, 0, 0, 0}, 0.0, 0.0, 0.0, 0.0},  // no tests at all
    {{2, 3, 2, 1}, 0.4, 0.447213595500, 0.8, 1.4},
    {{6, 1, 0, 9}, 0.909090909091, 0.925820099773, 36.0, 5.909090909091},
    {{3, 2, 3, 0}, 0.333333333333, 0.547722557505, 1.8, 2.333333333333},
    {{1, 1, 0, 0}, 0.5, 0.707106781187, 1.0, 0.5},
    {{2, 0, 1, 0}, 1.0, 0.816496580928, 4.0, 2.0},  // P = 0, DStar2 finite
    {{0, 1, 1, 0}, 0.0, 0.0, 0.0, -0.5},
    {{10, 0, 0, 100}, 1.0, 1.0, kInf, 10.0},
    {{7, 3, 2, 8}, 0.740384615385, 0.737864787373, 9.8, 6.75},
};

inline double expected_score(const FormulaCase& c, spectrum::Formula f) {
  switch (f) {
    case spectrum::Formula::Tarantula: return c.tarantula;
    case spectrum::Formula::Ochiai: return c.ochiai;
    case spectrum::Formula::DStar2: return c.dstar2;
    case spectrum::Formula::Op2: return c.op2;
  }
  return 0.0;
}

inline constexpr spectrum::Formula kAllFormulas[] = {spectrum::Formula::Tarantula, spectrum::Formula::Ochiai,
                                                     spectrum::Formula::DStar2, spectrum::Formula::Op2};

}  // namespace codehinter::testing
