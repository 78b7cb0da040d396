// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// Suggestion providers. Every provider receives the same structured context:
// failing tests, the top-ranked locations with a window of code around each,
// and the exercise statement. Implementations throw
// Error(ProviderUnavailable) when they cannot answer; callers fall back to
// deterministic templates.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/patch.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/spectrum.hpp"
#include "codehinter/trace.hpp"

namespace codehinter::assist {

inline constexpr int kContextRadius = 3;

struct CodeLine {
  int line = 0;
  std::string text;
};

struct LocationContext {
  SourceLocation location;
  double score = 0.0;
  spectrum::ElementCounts counts;
  std::vector<CodeLine> window;  // up to kContextRadius lines either side
};

struct ProviderContext {
  std::vector<trace::FailingTest> failing;
  std::optional<SyntaxErrorInfo> syntax_error;
  std::vector<LocationContext> locations;  // rank order
  std::string statement;
  runner::SourceSnapshot snapshot;
};

nlohmann::json to_json(const ProviderContext& context);

struct FixSuggestion {
  patch::LineEdit edit;
  std::string explanation;
};

struct PrintSuggestion {
  std::string file;
  int line = 0;  // the line whose variable is observed
  std::string variable;
  std::string reason;
};

class SuggestionProvider {
 public:
  virtual ~SuggestionProvider() = default;
  virtual std::string name() const = 0;

  /// One explanation per context location, in the same order.
  virtual std::vector<std::string> explain_locations(const ProviderContext& context) = 0;
  virtual std::vector<FixSuggestion> propose_fixes(const ProviderContext& context) = 0;
  virtual std::vector<PrintSuggestion> propose_prints(const ProviderContext& context) = 0;
  virtual std::vector<std::string> pseudocode(const runner::ExerciseSpec& exercise) = 0;
  virtual std::string chat(const std::string& message, const ProviderContext& context) = 0;
};

/// Deterministic rules and single-line mutations. Identical context in,
/// identical output out.
class StubProvider final : public SuggestionProvider {
 public:
  std::string name() const override { return "stub"; }
  std::vector<std::string> explain_locations(const ProviderContext& context) override;
  std::vector<FixSuggestion> propose_fixes(const ProviderContext& context) override;
  std::vector<PrintSuggestion> propose_prints(const ProviderContext& context) override;
  std::vector<std::string> pseudocode(const runner::ExerciseSpec& exercise) override;
  std::string chat(const std::string& message, const ProviderContext& context) override;
};

struct LiveProviderConfig {
  std::string base_url;  // e.g. https://host/v1; requests go to <base_url>/chat/completions
  std::string model;
  std::string api_key;
  int timeout_seconds = 60;
};

/// Chat-completion client. Replies are requested as JSON objects:
///   fixes:        {"fixes": [{"file", "line", "old_text", "new_text", "explanation"}]}
///   explanations: {"explanations": [string]}
///   prints:       {"prints": [{"file", "line", "variable", "reason"}]}
///   pseudocode:   {"steps": [string]}
class LiveProvider final : public SuggestionProvider {
 public:
  explicit LiveProvider(LiveProviderConfig config);

  /// Reads CODEHINTER_LLM_URL, CODEHINTER_LLM_MODEL, CODEHINTER_LLM_KEY.
  static std::optional<LiveProviderConfig> config_from_env();

  std::string name() const override { return "live:" + config_.model; }
  std::vector<std::string> explain_locations(const ProviderContext& context) override;
  std::vector<FixSuggestion> propose_fixes(const ProviderContext& context) override;
  std::vector<PrintSuggestion> propose_prints(const ProviderContext& context) override;
  std::vector<std::string> pseudocode(const runner::ExerciseSpec& exercise) override;
  std::string chat(const std::string& message, const ProviderContext& context) override;

 private:
  std::string complete(const std::string& system, const std::string& user, bool json_reply);
  nlohmann::json complete_json(const std::string& system, const std::string& user);

  LiveProviderConfig config_;
};

/// The live provider when CODEHINTER_LLM_URL is set, otherwise the stub.
std::shared_ptr<SuggestionProvider> provider_from_env();

/// The fallback sentence used whenever a provider cannot explain a location.
std::string template_explanation(const LocationContext& location);

}  // namespace codehinter::assist
