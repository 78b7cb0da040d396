// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>

#include "codehinter/assist.hpp"
#include "codehinter/error.hpp"
#include "codehinter/mutation.hpp"
#include "codehinter/provider.hpp"
#include "codehinter/pyscan.hpp"

namespace codehinter::assist {

using nlohmann::json;

namespace {

std::string line_text(const runner::SourceSnapshot& snapshot, const std::string& file, int line) {
  auto it = snapshot.files.find(file);
  if (it == snapshot.files.end()) return "";
  auto lines = patch::split_lines(it->second.content).lines;
  if (line < 1 || line > static_cast<int>(lines.size())) return "";
  return lines[line - 1];
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", score);
  return buf;
}

}  // namespace

std::string template_explanation(const LocationContext& loc) {
  std::string code;
  for (const auto& c : loc.window) {
    if (c.line == loc.location.line) code = std::string(pyscan::trim(c.text));
  }
  std::string text = to_string(loc.location) + " is covered by " + std::to_string(loc.counts.ef) + " failing / " +
                     std::to_string(loc.counts.ep) + " passing tests (suspiciousness " + format_score(loc.score) + ")";
  if (!code.empty()) text += ": `" + code + "`";
  return text + ".";
}

json to_json(const ProviderContext& context) {
  json failing = json::array();
  for (const auto& f : context.failing) {
    failing.push_back({{"test_id", f.test_id}, {"outcome", outcome_name(f.outcome)}, {"message", f.message}});
  }
  json locations = json::array();
  for (const auto& l : context.locations) {
    json window = json::array();
    for (const auto& c : l.window) window.push_back({{"line", c.line}, {"text", c.text}});
    locations.push_back({{"file", l.location.file},
                         {"line", l.location.line},
                         {"score", l.score},
                         {"counts", spectrum::to_json(l.counts)},
                         {"code", std::move(window)}});
  }
  json syntax = nullptr;
  if (context.syntax_error) {
    syntax = {{"file", context.syntax_error->file},
              {"line", context.syntax_error->line},
              {"message", context.syntax_error->message}};
  }
  return {{"failing_tests", std::move(failing)},
          {"syntax_error", std::move(syntax)},
          {"locations", std::move(locations)},
          {"statement", context.statement}};
}

std::vector<std::string> StubProvider::explain_locations(const ProviderContext& context) {
  std::vector<std::string> out;
  for (const auto& loc : context.locations) {
    std::string text = template_explanation(loc);
    if (loc.counts.ep == 0) {
      text += " No passing test runs this line, so it is a strong suspect.";
    } else {
      text += " Passing tests run it too; compare the inputs of the failing tests with the passing ones.";
    }
    out.push_back(std::move(text));
  }
  return out;
}

std::vector<FixSuggestion> StubProvider::propose_fixes(const ProviderContext& context) {
  std::vector<FixSuggestion> out;
  auto add = [&](const std::string& file, int line, const std::string& old_text,
                 const std::vector<mutation::Mutant>& mutants) {
    for (const auto& m : mutants) {
      patch::LineEdit edit{file, line, {old_text}, {m.text}};
      out.push_back({std::move(edit), "On " + file + ":" + std::to_string(line) + ", " + m.description + "."});
    }
  };

  if (context.syntax_error) {
    const auto& se = *context.syntax_error;
    std::vector<int> lines = {se.line};
    for (int l = se.line - 1; l >= 1; --l) {
      if (!pyscan::is_blank_or_comment(line_text(context.snapshot, se.file, l))) {
        lines.push_back(l);
        break;
      }
    }
    for (int l : lines) {
      std::string text = line_text(context.snapshot, se.file, l);
      if (!text.empty() || l == se.line) add(se.file, l, text, mutation::repair_line(text));
    }
    return out;
  }

  for (const auto& loc : context.locations) {
    std::string text = line_text(context.snapshot, loc.location.file, loc.location.line);
    add(loc.location.file, loc.location.line, text, mutation::mutate_line(text));
  }
  return out;
}

std::vector<PrintSuggestion> StubProvider::propose_prints(const ProviderContext& context) {
  std::vector<PrintSuggestion> out;
  std::vector<std::string> seen;
  for (std::size_t rank = 0; rank < context.locations.size(); ++rank) {
    const auto& loc = context.locations[rank];
    std::string text = line_text(context.snapshot, loc.location.file, loc.location.line);
    auto names = pyscan::assigned_names(text);
    std::string why = "assigned on line " + std::to_string(loc.location.line);
    if (names.empty()) {
      names = pyscan::referenced_names(text);
      why = "read on line " + std::to_string(loc.location.line);
    }
    for (const auto& n : names) {
      if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
      seen.push_back(n);
      out.push_back({loc.location.file, loc.location.line, n,
                     why + ", suspiciousness rank " + std::to_string(rank + 1)});
    }
  }
  return out;
}

std::vector<std::string> StubProvider::pseudocode(const runner::ExerciseSpec& exercise) {
  return structural_pseudocode(exercise);
}

std::string StubProvider::chat(const std::string& message, const ProviderContext& context) {
  std::string reply = "Offline assistant: free-form chat is not available without a language model.";
  if (context.syntax_error) {
    reply += " Python cannot parse " + context.syntax_error->file + " line " +
             std::to_string(context.syntax_error->line) + ": " + context.syntax_error->message + ".";
  } else if (!context.locations.empty()) {
    reply += " The most suspicious line is " + to_string(context.locations.front().location) + ".";
  }
  reply += " Try the helpers: locate lines, quiz, print statements, or the visualizer.";
  return reply;
}

std::shared_ptr<SuggestionProvider> provider_from_env() {
  if (auto config = LiveProvider::config_from_env()) return std::make_shared<LiveProvider>(*config);
  return std::make_shared<StubProvider>();
}

}  // namespace codehinter::assist
