// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/patch.hpp"

#include <algorithm>
#include <sstream>

#include "codehinter/error.hpp"
#include "codehinter/util.hpp"

namespace codehinter::patch {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

std::vector<std::string> split_exact(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
}

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::PreconditionViolated, "malformed patch proposal: " + message);
}

// Ascending by line; at equal lines an insertion precedes a replacement.
std::vector<LineEdit> sorted_edits(const std::vector<LineEdit>& edits) {
  std::vector<LineEdit> sorted = edits;
  std::stable_sort(sorted.begin(), sorted.end(), [](const LineEdit& a, const LineEdit& b) {
    if (a.file != b.file) return a.file < b.file;
    if (a.line != b.line) return a.line < b.line;
    return a.old_lines.empty() && !b.old_lines.empty();
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto& prev = sorted[i - 1];
    const auto& cur = sorted[i];
    if (prev.file != cur.file) continue;
    bool overlap = prev.line + static_cast<int>(prev.old_lines.size()) > cur.line ||
                   (prev.line == cur.line && prev.old_lines.empty() && cur.old_lines.empty());
    if (overlap) {
      throw Error(ErrorCode::PreconditionViolated,
                  "edits overlap at " + cur.file + ":" + std::to_string(cur.line),
                  {{"file", cur.file}, {"line", cur.line}});
    }
  }
  return sorted;
}

enum class OpKind { Equal, Delete, Insert };
struct Op {
  OpKind kind;
  int old_index;  // 0-based, valid for Equal/Delete
  int new_index;  // 0-based, valid for Equal/Insert
};

std::vector<Op> diff_ops(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  int prefix = 0;
  while (prefix < n && prefix < m && a[prefix] == b[prefix]) ++prefix;
  int suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix && a[n - 1 - suffix] == b[m - 1 - suffix]) ++suffix;

  std::vector<Op> ops;
  for (int i = 0; i < prefix; ++i) ops.push_back({OpKind::Equal, i, i});

  const int rn = n - prefix - suffix;
  const int rm = m - prefix - suffix;
  if (static_cast<long long>(rn + 1) * (rm + 1) > 16'000'000LL) {
    for (int i = 0; i < rn; ++i) ops.push_back({OpKind::Delete, prefix + i, -1});
    for (int j = 0; j < rm; ++j) ops.push_back({OpKind::Insert, -1, prefix + j});
  } else {
    // lcs[i][j]: LCS length of a[prefix+i..] and b[prefix+j..].
    std::vector<int> lcs(static_cast<std::size_t>(rn + 1) * (rm + 1), 0);
    auto at = [&](int i, int j) -> int& { return lcs[static_cast<std::size_t>(i) * (rm + 1) + j]; };
    for (int i = rn - 1; i >= 0; --i) {
      for (int j = rm - 1; j >= 0; --j) {
        at(i, j) = a[prefix + i] == b[prefix + j] ? at(i + 1, j + 1) + 1 : std::max(at(i + 1, j), at(i, j + 1));
      }
    }
    int i = 0, j = 0;
    while (i < rn || j < rm) {
      if (i < rn && j < rm && a[prefix + i] == b[prefix + j]) {
        ops.push_back({OpKind::Equal, prefix + i, prefix + j});
        ++i;
        ++j;
      } else if (j < rm && (i == rn || at(i, j + 1) > at(i + 1, j))) {
        ops.push_back({OpKind::Insert, -1, prefix + j});
        ++j;
      } else {
        ops.push_back({OpKind::Delete, prefix + i, -1});
        ++i;
      }
    }
  }
  for (int k = 0; k < suffix; ++k) ops.push_back({OpKind::Equal, n - suffix + k, m - suffix + k});
  return ops;
}

// Diff keys: the last line of a file without a trailing newline differs from
// the same text followed by one.
std::vector<std::string> diff_keys(const Lines& l) {
  std::vector<std::string> keys = l.lines;
  if (!l.trailing_newline && !keys.empty()) keys.back() += '\0';
  return keys;
}

std::string range(int start, int count) {
  if (count == 1) return std::to_string(start);
  return std::to_string(count == 0 ? start - 1 : start) + "," + std::to_string(count);
}

}  // namespace

std::string_view origin_name(Origin origin) {
  switch (origin) {
    case Origin::Provider: return "provider";
    case Origin::Mutation: return "mutation";
    case Origin::Solution: return "solution";
  }
  return "provider";
}

json to_json(const LineEdit& edit) {
  return {{"file", edit.file},
          {"line", edit.line},
          {"old_text", edit.old_lines.empty() ? json(nullptr) : json(join(edit.old_lines))},
          {"new_text", edit.new_lines.empty() ? json(nullptr) : json(join(edit.new_lines))}};
}

std::string proposal_id(const std::vector<LineEdit>& edits) {
  json arr = json::array();
  for (const auto& e : edits) arr.push_back(to_json(e));
  return sha256_hex(arr.dump()).substr(0, 12);
}

PatchProposal make_proposal(std::vector<LineEdit> edits, std::string rationale, Origin origin) {
  if (edits.empty()) throw Error(ErrorCode::PreconditionViolated, "a patch proposal needs at least one edit");
  PatchProposal p;
  p.id = proposal_id(edits);
  p.edits = std::move(edits);
  p.rationale = std::move(rationale);
  p.origin = origin;
  return p;
}

json to_json(const PatchProposal& proposal) {
  json edits = json::array();
  for (const auto& e : proposal.edits) edits.push_back(to_json(e));
  return {{"id", proposal.id},
          {"origin", origin_name(proposal.origin)},
          {"rationale", proposal.rationale},
          {"edits", std::move(edits)}};
}

PatchProposal proposal_from_json(const json& j) {
  if (!j.is_object()) malformed("expected an object");
  if (!j.contains("edits") || !j["edits"].is_array()) malformed("'edits' must be an array");
  std::vector<LineEdit> edits;
  for (const auto& e : j["edits"]) {
    if (!e.is_object()) malformed("each edit must be an object");
    LineEdit edit;
    if (!e.contains("file") || !e["file"].is_string()) malformed("edit.file must be a string");
    if (!e.contains("line") || !e["line"].is_number_integer()) malformed("edit.line must be an integer");
    edit.file = e["file"].get<std::string>();
    edit.line = e["line"].get<int>();
    if (!is_normalized_path(edit.file) || edit.line < 1) malformed("bad edit location");
    for (const char* side : {"old_text", "new_text"}) {
      if (!e.contains(side) || e[side].is_null()) continue;
      if (!e[side].is_string()) malformed(std::string("edit.") + side + " must be a string or null");
      auto lines = split_exact(e[side].get<std::string>());
      (std::string_view(side) == "old_text" ? edit.old_lines : edit.new_lines) = std::move(lines);
    }
    edits.push_back(std::move(edit));
  }
  std::string rationale = j.value("rationale", std::string());
  Origin origin = Origin::Provider;
  std::string o = j.value("origin", std::string("provider"));
  if (o == "mutation") origin = Origin::Mutation;
  else if (o == "solution") origin = Origin::Solution;
  else if (o != "provider") malformed("unknown origin '" + o + "'");
  return make_proposal(std::move(edits), std::move(rationale), origin);
}

Lines split_lines(std::string_view text) {
  Lines out;
  out.trailing_newline = text.empty() || text.back() == '\n';
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.lines.emplace_back(text.substr(start));
      break;
    }
    out.lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join_lines(const Lines& l) {
  std::string out = join(l.lines);
  if (l.trailing_newline && !l.lines.empty()) out += '\n';
  return out;
}

std::map<std::string, std::string> apply_edits(const std::map<std::string, std::string>& files,
                                               const std::vector<LineEdit>& edits) {
  auto ordered = sorted_edits(edits);
  std::map<std::string, std::string> out = files;
  std::map<std::string, Lines> touched;
  for (const auto& e : ordered) {
    if (!files.contains(e.file)) {
      throw Error(ErrorCode::StaleProposal, "'" + e.file + "' is not part of the project", {{"file", e.file}});
    }
    if (!touched.contains(e.file)) touched[e.file] = split_lines(files.at(e.file));
  }
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
    const LineEdit& e = *it;
    Lines& l = touched[e.file];
    const int n = static_cast<int>(l.lines.size());
    const int k = static_cast<int>(e.old_lines.size());
    auto stale = [&](const std::string& why) {
      throw Error(ErrorCode::StaleProposal, e.file + ":" + std::to_string(e.line) + ": " + why,
                  {{"file", e.file}, {"line", e.line}});
    };
    if (e.line < 1 || e.line > n + 1 || e.line - 1 + k > n) stale("line is out of range");
    for (int i = 0; i < k; ++i) {
      if (l.lines[e.line - 1 + i] != e.old_lines[i]) stale("text no longer matches the proposal");
    }
    auto first = l.lines.begin() + (e.line - 1);
    l.lines.erase(first, first + k);
    l.lines.insert(l.lines.begin() + (e.line - 1), e.new_lines.begin(), e.new_lines.end());
  }
  for (auto& [file, l] : touched) {
    out[file] = join_lines(l);
  }
  return out;
}

std::vector<LineEdit> invert_edits(const std::vector<LineEdit>& edits) {
  auto ordered = sorted_edits(edits);
  std::vector<LineEdit> inverse;
  std::map<std::string, int> offset;
  for (const auto& e : ordered) {
    int& off = offset[e.file];
    LineEdit inv{e.file, e.line + off, e.new_lines, e.old_lines};
    off += static_cast<int>(e.new_lines.size()) - static_cast<int>(e.old_lines.size());
    // Edits that touch in the patched text become one, so two adjacent
    // deletions do not invert into two insertions at the same line.
    if (!inverse.empty()) {
      LineEdit& prev = inverse.back();
      if (prev.file == inv.file && prev.line + static_cast<int>(prev.old_lines.size()) == inv.line) {
        prev.old_lines.insert(prev.old_lines.end(), inv.old_lines.begin(), inv.old_lines.end());
        prev.new_lines.insert(prev.new_lines.end(), inv.new_lines.begin(), inv.new_lines.end());
        continue;
      }
    }
    inverse.push_back(std::move(inv));
  }
  return inverse;
}

namespace {

std::map<std::string, std::string> contents_of(const runner::SourceSnapshot& s) {
  std::map<std::string, std::string> out;
  for (const auto& [file, snap] : s.files) out[file] = snap.content;
  return out;
}

AppliedPatch finish(const runner::SourceSnapshot& before, const std::map<std::string, std::string>& after) {
  AppliedPatch result;
  result.snapshot = runner::make_snapshot(after);
  for (const auto& [file, text] : after) {
    const std::string& old = before.files.at(file).content;
    if (old != text) result.diff += unified_diff(file, old, text);
  }
  return result;
}

}  // namespace

AppliedPatch apply_patch(const runner::SourceSnapshot& snapshot, const PatchProposal& proposal) {
  if (proposal.edits.empty()) throw Error(ErrorCode::PreconditionViolated, "a patch proposal needs at least one edit");
  return finish(snapshot, apply_edits(contents_of(snapshot), proposal.edits));
}

AppliedPatch revert_patch(const runner::SourceSnapshot& applied, const PatchProposal& proposal) {
  return finish(applied, apply_edits(contents_of(applied), invert_edits(proposal.edits)));
}

AppliedPatch apply_patch_to_project(const runner::ProjectConfig& config, const PatchProposal& proposal) {
  auto before = runner::snapshot_source(config);
  auto result = apply_patch(before, proposal);
  for (const auto& [file, snap] : result.snapshot.files) {
    if (before.files.at(file).hash != snap.hash) write_file_atomic(config.root / file, snap.content);
  }
  return result;
}

std::vector<Hunk> line_diff(const std::vector<std::string>& before, const std::vector<std::string>& after) {
  auto ops = diff_ops(before, after);
  std::vector<Hunk> hunks;
  int old_pos = 0, new_pos = 0;
  Hunk* open = nullptr;
  for (const auto& op : ops) {
    if (op.kind == OpKind::Equal) {
      open = nullptr;
      ++old_pos;
      ++new_pos;
      continue;
    }
    if (!open) {
      hunks.push_back({old_pos + 1, {}, new_pos + 1, {}});
      open = &hunks.back();
    }
    if (op.kind == OpKind::Delete) {
      open->removed.push_back(before[op.old_index]);
      ++old_pos;
    } else {
      open->added.push_back(after[op.new_index]);
      ++new_pos;
    }
  }
  return hunks;
}

int changed_line_count(std::string_view before, std::string_view after) {
  int total = 0;
  for (const auto& h : line_diff(diff_keys(split_lines(before)), diff_keys(split_lines(after)))) {
    total += static_cast<int>(std::max(h.removed.size(), h.added.size()));
  }
  return total;
}

std::string unified_diff(const std::string& file, std::string_view before, std::string_view after, int context) {
  Lines a = split_lines(before);
  Lines b = split_lines(after);
  auto ka = diff_keys(a);
  auto kb = diff_keys(b);
  auto ops = diff_ops(ka, kb);
  if (std::all_of(ops.begin(), ops.end(), [](const Op& o) { return o.kind == OpKind::Equal; })) return "";

  std::ostringstream out;
  out << "--- a/" << file << "\n+++ b/" << file << "\n";
  auto emit = [&](char tag, const std::string& key) {
    bool no_newline = !key.empty() && key.back() == '\0';
    out << tag << (no_newline ? key.substr(0, key.size() - 1) : key) << "\n";
    if (no_newline) out << "\\ No newline at end of file\n";
  };

  const int total = static_cast<int>(ops.size());
  int i = 0;
  while (i < total) {
    while (i < total && ops[i].kind == OpKind::Equal) ++i;
    if (i == total) break;
    int start = std::max(0, i - context);
    // Extend the hunk while the gap between changes is small enough to merge.
    int end = i;
    for (;;) {
      while (end < total && ops[end].kind != OpKind::Equal) ++end;
      int gap = end;
      while (gap < total && ops[gap].kind == OpKind::Equal) ++gap;
      if (gap < total && gap - end <= 2 * context) {
        end = gap;
        continue;
      }
      end = std::min(total, end + context);
      break;
    }
    int old_count = 0, new_count = 0;
    int old_before = 0, new_before = 0;
    for (int k = 0; k < start; ++k) {
      if (ops[k].kind != OpKind::Insert) ++old_before;
      if (ops[k].kind != OpKind::Delete) ++new_before;
    }
    for (int k = start; k < end; ++k) {
      if (ops[k].kind != OpKind::Insert) ++old_count;
      if (ops[k].kind != OpKind::Delete) ++new_count;
    }
    out << "@@ -" << range(old_before + 1, old_count) << " +" << range(new_before + 1, new_count) << " @@\n";
    for (int k = start; k < end; ++k) {
      switch (ops[k].kind) {
        case OpKind::Equal: emit(' ', ka[ops[k].old_index]); break;
        case OpKind::Delete: emit('-', ka[ops[k].old_index]); break;
        case OpKind::Insert: emit('+', kb[ops[k].new_index]); break;
      }
    }
    i = end;
  }
  return out.str();
}

}  // namespace codehinter::patch
