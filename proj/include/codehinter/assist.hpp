// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// The helper tools: grounded location explanations, validated quizzes,
// print instrumentation, the visualizer link, pseudo-code and the solution
// reveal. None of these write to the student's files.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codehinter/patch.hpp"
#include "codehinter/provider.hpp"
#include "codehinter/runner.hpp"
#include "codehinter/spectrum.hpp"

namespace codehinter::assist {

inline constexpr std::size_t kDefaultMaxCandidates = 40;
inline constexpr std::size_t kQuizContextLines = 8;  // ranked lines mutated for a quiz
inline constexpr std::size_t kMaxPrints = 3;
inline constexpr std::size_t kVisualizerUrlLimit = 8000;
inline constexpr std::string_view kVisualizerBase = "https://pythontutor.com/visualize.html";
inline constexpr std::string_view kDebugMarker = "# codehinter:debug";

/// Builds the provider context around the top-k ranked locations.
ProviderContext build_context(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                              const std::string& statement = "", std::size_t k = spectrum::kDefaultTopK);

// ---- Locate Lines With Errors ----

struct LocatedLine {
  SourceLocation location;
  double score = 0.0;
  spectrum::ElementCounts counts;
  std::string code;
  std::string explanation;
};

struct LocateResult {
  spectrum::Formula formula = spectrum::kDefaultFormula;
  std::vector<LocatedLine> lines;
  bool fallback = false;  // template explanations were used
};

/// Throws NoFailingTests.
LocateResult locate_and_explain(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                                SuggestionProvider& provider, const std::string& statement = "",
                                spectrum::Formula formula = spectrum::kDefaultFormula,
                                std::size_t k = spectrum::kDefaultTopK);

nlohmann::json to_json(const LocateResult& result);

// ---- Provide Hint and Quiz ----

enum class ValidationOutcome { AllPass, StillFailing, NewFailures, SyntaxError };

std::string_view outcome_name(ValidationOutcome outcome);

struct ValidationResult {
  bool applied = false;
  ValidationOutcome outcome = ValidationOutcome::StillFailing;
  std::vector<std::string> failing_after;
};

nlohmann::json to_json(const ValidationResult& result);

/// Applies the proposal to a shadow copy of the project, runs the adapter
/// there, and classifies the result against the failing set `before`.
ValidationResult validate_proposal(const runner::ProjectConfig& config, const runner::SourceSnapshot& snapshot,
                                   const patch::PatchProposal& proposal, const std::vector<std::string>& before);

struct QuizOption {
  patch::PatchProposal proposal;
  std::string explanation;
  ValidationResult validation;
  std::string diff;
};

struct QuizCard {
  std::string id;
  std::string question;
  std::vector<QuizOption> options;
  int correct_index = 0;
  std::string snapshot_hash;
  std::size_t candidates_validated = 0;
};

/// `include_answer` false strips correct_index, explanations and validation.
nlohmann::json to_json(const QuizCard& card, bool include_answer);
QuizCard quiz_from_json(const nlohmann::json& j);

/// Throws NoFailingTests, NoValidatedFix, ValidationBudgetExceeded,
/// InsufficientDistractors.
QuizCard make_quiz(const runner::ProjectConfig& config, const CoverageSpectrum& spectrum,
                   const runner::SourceSnapshot& snapshot, SuggestionProvider& provider,
                   std::size_t max_candidates = kDefaultMaxCandidates);

struct QuizAnswer {
  bool is_correct = false;
  std::string explanation;
};

/// Throws IndexOutOfRange.
QuizAnswer answer_quiz(const QuizCard& card, int choice);

// ---- Insert Print Statement ----

struct PrintInsertion {
  std::string file;
  int target_line = 0;  // the line the variable was chosen from
  int after_line = 0;   // inserted after this original line (0: top of file)
  std::string variable;
  std::string reason;
  std::string tag;   // "[CH1]"
  std::string text;  // the inserted line
};

struct PrintPlan {
  std::string id;
  std::string snapshot_hash;
  std::vector<PrintInsertion> insertions;
  std::map<std::string, std::string> rendered;          // instrumented file contents
  std::map<std::string, std::vector<int>> inserted_at;  // line numbers in `rendered`
};

nlohmann::json to_json(const PrintPlan& plan);
PrintPlan print_plan_from_json(const nlohmann::json& j);

/// Renders a plan from explicit suggestions (at most kMaxPrints are used).
PrintPlan build_print_plan(const runner::SourceSnapshot& snapshot, const std::vector<PrintSuggestion>& suggestions);

/// Throws NoFailingTests.
PrintPlan suggest_prints(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                         SuggestionProvider& provider);

/// The edits that turn the snapshot into the plan's rendered sources.
patch::PatchProposal print_plan_patch(const PrintPlan& plan);

struct DebugEntry {
  std::string test_id;
  int insertion = -1;  // index into the plan's insertions, -1 if untagged
  std::string text;
};

struct TestOutcome {
  std::string test_id;
  Outcome outcome = Outcome::Pass;
  bool operator==(const TestOutcome&) const = default;
};

struct DebugOutput {
  std::vector<TestOutcome> outcomes;
  std::vector<DebugEntry> lines;
  std::optional<SyntaxErrorInfo> syntax_error;
};

nlohmann::json to_json(const DebugOutput& output);

/// Throws SnapshotDrift when the project no longer matches the plan.
DebugOutput run_instrumented(const PrintPlan& plan, const runner::ProjectConfig& config);

// ---- Open Python Tutor ----

/// Throws PreconditionViolated (unknown file) and SourceTooLarge.
std::string visualizer_url(const runner::SourceSnapshot& snapshot, const std::string& entry_file,
                           std::size_t limit = kVisualizerUrlLimit);

std::string percent_encode(std::string_view text);

// ---- Pseudo-code ----

struct Pseudocode {
  std::vector<std::string> steps;
  bool fallback = false;
  std::string text() const;  // "1. ...\n2. ...\n"
};

/// Provider first, then the structural stub. Throws PreconditionViolated on
/// an empty statement.
Pseudocode pseudocode(const runner::ExerciseSpec& exercise, SuggestionProvider& provider);

/// The structural stub: steps from the reference solution's control
/// structure when there is one, otherwise the statement's sentences.
std::vector<std::string> structural_pseudocode(const runner::ExerciseSpec& exercise);

// ---- Solution reveal ----

/// Throws NoReferenceSolution and NoOpReveal.
patch::PatchProposal reveal_solution(const runner::ExerciseSpec& exercise, const runner::SourceSnapshot& snapshot);

}  // namespace codehinter::assist
