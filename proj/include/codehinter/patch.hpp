// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Line-granular edits with exact old-text matching, unified diffs, and a
// line-level LCS diff.
//
// An edit replaces the block of lines starting at `line` whose text is
// `old_lines` with `new_lines`. Either side may be empty: an empty
// `old_lines` inserts before `line` (line may then be one past the end), an
// empty `new_lines` deletes. In JSON both sides are '\n'-joined strings,
// null for an empty side.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/runner.hpp"

namespace codehinter::patch {

enum class Origin { Provider, Mutation, Solution };

std::string_view origin_name(Origin origin);

struct LineEdit {
  std::string file;
  int line = 1;
  std::vector<std::string> old_lines;
  std::vector<std::string> new_lines;
  bool operator==(const LineEdit&) const = default;
};

struct PatchProposal {
  std::string id;  // content hash of the edits, see proposal_id()
  std::vector<LineEdit> edits;
  std::string rationale;
  Origin origin = Origin::Provider;
  bool operator==(const PatchProposal&) const = default;
};

/// Deterministic id derived from the edits only.
std::string proposal_id(const std::vector<LineEdit>& edits);

/// Builds a proposal and assigns its id. Throws PreconditionViolated when
/// `edits` is empty.
PatchProposal make_proposal(std::vector<LineEdit> edits, std::string rationale, Origin origin);

nlohmann::json to_json(const LineEdit& edit);
nlohmann::json to_json(const PatchProposal& proposal);
/// Throws PreconditionViolated on malformed input. The id is recomputed.
PatchProposal proposal_from_json(const nlohmann::json& j);

/// A file as lines, remembering whether it ended with a newline.
struct Lines {
  std::vector<std::string> lines;
  bool trailing_newline = true;
};
Lines split_lines(std::string_view text);
std::string join_lines(const Lines& lines);

/// Applies to in-memory contents. Throws StaleProposal when any old text
/// does not match and PreconditionViolated when edits overlap.
std::map<std::string, std::string> apply_edits(const std::map<std::string, std::string>& files,
                                               const std::vector<LineEdit>& edits);

/// The edits that undo `edits` once they have been applied.
std::vector<LineEdit> invert_edits(const std::vector<LineEdit>& edits);

struct AppliedPatch {
  runner::SourceSnapshot snapshot;
  std::string diff;
};

AppliedPatch apply_patch(const runner::SourceSnapshot& snapshot, const PatchProposal& proposal);
AppliedPatch revert_patch(const runner::SourceSnapshot& applied, const PatchProposal& proposal);

/// Writes the patched files into the project. The only operation in the
/// system that modifies student files.
AppliedPatch apply_patch_to_project(const runner::ProjectConfig& config, const PatchProposal& proposal);

struct Hunk {
  int old_start = 0;  // 1-based first line in the old text
  std::vector<std::string> removed;
  int new_start = 0;
  std::vector<std::string> added;
};

/// Minimal line-level changes turning `before` into `after` (LCS based).
std::vector<Hunk> line_diff(const std::vector<std::string>& before, const std::vector<std::string>& after);

/// Number of lines that differ: the larger side of each hunk, summed.
int changed_line_count(std::string_view before, std::string_view after);

std::string unified_diff(const std::string& file, std::string_view before, std::string_view after, int context = 3);

}  // namespace codehinter::patch
