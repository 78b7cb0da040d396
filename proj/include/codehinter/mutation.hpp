// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Single-line program mutations: the candidate fixes and distractors of the
// deterministic quiz provider.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace codehinter::mutation {

struct Mutant {
  std::string text;         // the whole replacement line
  std::string family;       // comparison | off-by-one | operator | index | boolean | syntax
  std::string description;  // human-readable summary of the change
};

/// Every distinct mutant of one source line, in a fixed order: comparison
/// flips, operator swaps, boolean swaps, off-by-one literals, then boundary
/// index changes. Strings and comments are never touched.
std::vector<Mutant> mutate_line(std::string_view line);

/// Repairs for a line reported by a syntax error: add a missing ':' or ')',
/// drop a stray ')' or ']', turn '=' in a condition into '=='.
std::vector<Mutant> repair_line(std::string_view line);

}  // namespace codehinter::mutation
