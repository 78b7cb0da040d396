// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/assist.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "codehinter/error.hpp"
#include "codehinter/pyscan.hpp"
#include "codehinter/util.hpp"

namespace codehinter::assist {

using nlohmann::json;

namespace {

std::vector<std::string> file_lines(const runner::SourceSnapshot& snapshot, const std::string& file) {
  auto it = snapshot.files.find(file);
  if (it == snapshot.files.end()) return {};
  return patch::split_lines(it->second.content).lines;
}

std::vector<CodeLine> window_around(const std::vector<std::string>& lines, int line) {
  std::vector<CodeLine> out;
  const int n = static_cast<int>(lines.size());
  for (int l = std::max(1, line - kContextRadius); l <= std::min(n, line + kContextRadius); ++l) {
    out.push_back({l, lines[l - 1]});
  }
  return out;
}

bool provider_unavailable(const Error& e) { return e.code() == ErrorCode::ProviderUnavailable; }

std::vector<std::string> failing_ids(const CoverageSpectrum& spectrum) {
  std::vector<std::string> ids;
  for (const auto& r : spectrum.records) {
    if (r.failing()) ids.push_back(r.test_id);
  }
  return ids;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 3) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i].substr(ids[i].rfind("::") == std::string::npos ? 0 : ids[i].rfind("::") + 2);
  }
  if (ids.size() > limit) out += ", ...";
  return out;
}

// True when the explanation only names locations from `allowed`.
bool grounded(const std::string& text, const LocationContext& own, const std::vector<LocationContext>& allowed) {
  static const std::regex kFileLine(R"(([A-Za-z0-9_./-]+\.py):(\d+))");
  static const std::regex kLine(R"(\b[Ll]ine (\d+))");
  auto allowed_line = [&](const std::string& file, int line) {
    return std::any_of(allowed.begin(), allowed.end(), [&](const LocationContext& l) {
      return (file.empty() || l.location.file == file) && l.location.line == line;
    });
  };
  for (std::sregex_iterator it(text.begin(), text.end(), kFileLine), end; it != end; ++it) {
    if (!allowed_line((*it)[1].str(), std::stoi((*it)[2].str()))) return false;
  }
  for (std::sregex_iterator it(text.begin(), text.end(), kLine), end; it != end; ++it) {
    if (!allowed_line(own.location.file, std::stoi((*it)[1].str()))) return false;
  }
  return true;
}

}  // namespace

ProviderContext build_context(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                              const std::string& statement, std::size_t k) {
  ProviderContext ctx;
  ctx.snapshot = snapshot;
  ctx.statement = statement;
  auto report = trace::summarize(spectrum);
  ctx.failing = report.failing;
  ctx.syntax_error = report.syntax_error;
  if (ctx.syntax_error) {
    LocationContext loc;
    loc.location = {ctx.syntax_error->file, ctx.syntax_error->line};
    loc.window = window_around(file_lines(snapshot, loc.location.file), loc.location.line);
    ctx.locations.push_back(std::move(loc));
    return ctx;
  }
  if (ctx.failing.empty()) return ctx;
  auto counts = spectrum::derive_counts(spectrum);
  auto ranking = spectrum::rank(spectrum, spectrum::kDefaultFormula);
  for (const auto& r : spectrum::top_k(ranking, k)) {
    LocationContext loc;
    loc.location = r.location;
    loc.score = r.score;
    loc.counts = counts.at(r.location);
    loc.window = window_around(file_lines(snapshot, r.location.file), r.location.line);
    ctx.locations.push_back(std::move(loc));
  }
  return ctx;
}

// ---- locate ----

LocateResult locate_and_explain(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                                SuggestionProvider& provider, const std::string& statement,
                                spectrum::Formula formula, std::size_t k) {
  if (spectrum.records.empty() || failing_ids(spectrum).empty()) {
    throw Error(ErrorCode::NoFailingTests, "there are no failing tests to localize");
  }
  auto counts = spectrum::derive_counts(spectrum);
  auto ranking = spectrum::rank(spectrum, formula);
  ProviderContext ctx = build_context(spectrum, snapshot, statement, k);
  // The context must describe exactly the ranking being explained.
  ctx.locations.clear();
  for (const auto& r : spectrum::top_k(ranking, k)) {
    LocationContext loc;
    loc.location = r.location;
    loc.score = r.score;
    loc.counts = counts.at(r.location);
    loc.window = window_around(file_lines(snapshot, r.location.file), r.location.line);
    ctx.locations.push_back(std::move(loc));
  }

  LocateResult result;
  result.formula = formula;
  std::vector<std::string> explanations;
  try {
    explanations = provider.explain_locations(ctx);
  } catch (const Error& e) {
    if (!provider_unavailable(e)) throw;
  }
  if (explanations.size() != ctx.locations.size()) {
    explanations.clear();
    result.fallback = true;
  }
  for (std::size_t i = 0; i < ctx.locations.size(); ++i) {
    const auto& loc = ctx.locations[i];
    std::string text = result.fallback ? template_explanation(loc) : explanations[i];
    if (!grounded(text, loc, ctx.locations)) {
      text = template_explanation(loc);
      result.fallback = true;
    }
    std::string name = to_string(loc.location);
    if (text.find(name) == std::string::npos) text = name + ": " + text;
    auto lines = file_lines(snapshot, loc.location.file);
    std::string code = loc.location.line <= static_cast<int>(lines.size()) ? lines[loc.location.line - 1] : "";
    result.lines.push_back({loc.location, loc.score, loc.counts, code, std::move(text)});
  }
  return result;
}

json to_json(const LocateResult& result) {
  json lines = json::array();
  for (const auto& l : result.lines) {
    lines.push_back({{"file", l.location.file},
                     {"line", l.location.line},
                     {"score", l.score},
                     {"counts", spectrum::to_json(l.counts)},
                     {"code", l.code},
                     {"explanation", l.explanation}});
  }
  return {{"formula", spectrum::formula_name(result.formula)}, {"locations", std::move(lines)},
          {"fallback", result.fallback}};
}

// ---- quiz ----

std::string_view outcome_name(ValidationOutcome outcome) {
  switch (outcome) {
    case ValidationOutcome::AllPass: return "all-pass";
    case ValidationOutcome::StillFailing: return "still-failing";
    case ValidationOutcome::NewFailures: return "new-failures";
    case ValidationOutcome::SyntaxError: return "syntax-error";
  }
  return "still-failing";
}

json to_json(const ValidationResult& r) {
  return {{"applied", r.applied}, {"outcome", outcome_name(r.outcome)}, {"failing_after", r.failing_after}};
}

namespace {

ValidationResult validation_from_json(const json& j) {
  ValidationResult r;
  r.applied = j.at("applied").get<bool>();
  std::string o = j.at("outcome").get<std::string>();
  for (auto v : {ValidationOutcome::AllPass, ValidationOutcome::StillFailing, ValidationOutcome::NewFailures,
                 ValidationOutcome::SyntaxError}) {
    if (outcome_name(v) == o) r.outcome = v;
  }
  r.failing_after = j.at("failing_after").get<std::vector<std::string>>();
  return r;
}

std::map<std::string, std::string> contents_of(const runner::SourceSnapshot& s) {
  std::map<std::string, std::string> out;
  for (const auto& [file, snap] : s.files) out[file] = snap.content;
  return out;
}

ValidationResult classify(const CoverageSpectrum& after, const std::vector<std::string>& before) {
  ValidationResult r;
  r.applied = true;
  if (after.syntax_error) {
    r.outcome = ValidationOutcome::SyntaxError;
    return r;
  }
  r.failing_after = failing_ids(after);
  if (r.failing_after.empty()) {
    r.outcome = ValidationOutcome::AllPass;
    return r;
  }
  std::set<std::string> old(before.begin(), before.end());
  bool fresh = std::any_of(r.failing_after.begin(), r.failing_after.end(),
                           [&](const std::string& id) { return !old.contains(id); });
  r.outcome = fresh ? ValidationOutcome::NewFailures : ValidationOutcome::StillFailing;
  return r;
}

ValidationResult validate_contents(const runner::ProjectConfig& config,
                                   const std::map<std::string, std::string>& contents,
                                   const std::vector<std::string>& before) {
  TempDir shadow("codehinter-shadow");
  runner::write_shadow_copy(config, shadow.path(), contents);
  try {
    return classify(runner::run_adapter(config, shadow.path()).spectrum, before);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Timeout) throw;
    ValidationResult r;
    r.applied = true;
    r.outcome = ValidationOutcome::NewFailures;
    return r;
  }
}

std::string option_explanation(const std::string& base, const ValidationResult& v, bool correct) {
  std::string text = correct ? "Correct. " : "Not this one. ";
  text += base;
  if (!text.empty() && text.back() != '.') text += '.';
  switch (v.outcome) {
    case ValidationOutcome::AllPass: text += " With this change every test passes."; break;
    case ValidationOutcome::StillFailing:
      text += " With this change " + std::to_string(v.failing_after.size()) + " test(s) still fail: " +
              join_ids(v.failing_after) + ".";
      break;
    case ValidationOutcome::NewFailures:
      text += " This change breaks other tests" +
              (v.failing_after.empty() ? std::string(" (the run did not finish)") : ": " + join_ids(v.failing_after)) +
              ".";
      break;
    case ValidationOutcome::SyntaxError: text += " With this change the file no longer parses."; break;
  }
  return text;
}

}  // namespace

ValidationResult validate_proposal(const runner::ProjectConfig& config, const runner::SourceSnapshot& snapshot,
                                   const patch::PatchProposal& proposal, const std::vector<std::string>& before) {
  std::map<std::string, std::string> contents;
  try {
    contents = patch::apply_edits(contents_of(snapshot), proposal.edits);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::StaleProposal && e.code() != ErrorCode::PreconditionViolated) throw;
    ValidationResult r;
    r.applied = false;
    r.failing_after = before;
    return r;
  }
  return validate_contents(config, contents, before);
}

QuizCard make_quiz(const runner::ProjectConfig& config, const CoverageSpectrum& spectrum,
                   const runner::SourceSnapshot& snapshot, SuggestionProvider& provider, std::size_t max_candidates) {
  auto report = trace::summarize(spectrum);
  if (!report.syntax_branch() && report.failing.empty()) {
    throw Error(ErrorCode::NoFailingTests, "every test passes; there is nothing to quiz about");
  }
  std::string statement = config.exercise ? config.exercise->statement : "";
  ProviderContext ctx = build_context(spectrum, snapshot, statement, kQuizContextLines);

  std::vector<FixSuggestion> suggestions;
  try {
    suggestions = provider.propose_fixes(ctx);
  } catch (const Error& e) {
    if (!provider_unavailable(e)) throw;
  }
  if (suggestions.empty()) suggestions = StubProvider().propose_fixes(ctx);

  const auto before = failing_ids(spectrum);
  const auto original = contents_of(snapshot);

  struct Validated {
    patch::PatchProposal proposal;
    std::string explanation;
    ValidationResult validation;
  };
  std::optional<Validated> fix;
  std::vector<Validated> distractors;
  std::set<std::string> seen;
  std::size_t validated = 0;
  std::size_t usable = 0;
  for (const auto& s : suggestions) {
    if (fix && distractors.size() >= 2) break;
    std::map<std::string, std::string> contents;
    try {
      contents = patch::apply_edits(original, {s.edit});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StaleProposal || e.code() == ErrorCode::PreconditionViolated) continue;
      throw;
    }
    if (contents == original) continue;
    json key = contents;
    if (!seen.insert(key.dump()).second) continue;
    ++usable;
    if (validated >= max_candidates) continue;  // counted, not run
    ++validated;
    ValidationResult v = validate_contents(config, contents, before);
    Validated item{patch::make_proposal({s.edit}, s.explanation,
                                        dynamic_cast<StubProvider*>(&provider) ? patch::Origin::Mutation
                                                                               : patch::Origin::Provider),
                   s.explanation, v};
    if (v.outcome == ValidationOutcome::AllPass) {
      if (!fix) fix = std::move(item);
    } else if (distractors.size() < 2) {
      distractors.push_back(std::move(item));
    }
  }

  json details = {{"validated", validated}, {"max_candidates", max_candidates}};
  if (!fix) {
    if (usable > validated) {
      throw Error(ErrorCode::ValidationBudgetExceeded,
                  "no validated fix within " + std::to_string(max_candidates) + " candidates", details);
    }
    throw Error(ErrorCode::NoValidatedFix, "no candidate change makes every test pass", details);
  }
  if (distractors.size() < 2) {
    throw Error(ErrorCode::InsufficientDistractors, "found a fix but not two failing alternatives", details);
  }

  const std::string snapshot_hash = snapshot.hash();
  QuizCard card;
  card.snapshot_hash = snapshot_hash;
  card.candidates_validated = validated;
  card.correct_index = static_cast<int>(std::stoul(sha256_hex(snapshot_hash + fix->proposal.id).substr(0, 8),
                                                   nullptr, 16) % 3);
  std::size_t next = 0;
  for (int i = 0; i < 3; ++i) {
    const Validated& v = i == card.correct_index ? *fix : distractors[next++];
    QuizOption opt;
    opt.proposal = v.proposal;
    opt.validation = v.validation;
    opt.explanation = option_explanation(v.explanation, v.validation, i == card.correct_index);
    opt.diff = patch::apply_patch(snapshot, v.proposal).diff;
    card.options.push_back(std::move(opt));
  }
  std::string ids;
  for (const auto& o : card.options) ids += o.proposal.id;
  card.id = sha256_hex(snapshot_hash + ids).substr(0, 12);
  if (report.syntax_branch()) {
    card.question = "Python cannot parse " + report.syntax_error->file + " (line " +
                    std::to_string(report.syntax_error->line) + ": " + report.syntax_error->message +
                    "). Which change fixes it?";
  } else {
    const auto& f = report.failing.front();
    card.question = "Test " + join_ids({f.test_id}) + " fails with: " + first_line(f.message) +
                    ". Which change makes every test pass?";
  }
  return card;
}

json to_json(const QuizCard& card, bool include_answer) {
  json options = json::array();
  for (const auto& o : card.options) {
    json opt = {{"proposal", patch::to_json(o.proposal)}, {"diff", o.diff}};
    if (include_answer) {
      opt["explanation"] = o.explanation;
      opt["validation"] = to_json(o.validation);
    }
    options.push_back(std::move(opt));
  }
  json j = {{"id", card.id},
            {"question", card.question},
            {"options", std::move(options)},
            {"snapshot_hash", card.snapshot_hash},
            {"candidates_validated", card.candidates_validated}};
  if (include_answer) j["correct_index"] = card.correct_index;
  return j;
}

QuizCard quiz_from_json(const json& j) {
  QuizCard card;
  card.id = j.at("id").get<std::string>();
  card.question = j.at("question").get<std::string>();
  card.correct_index = j.at("correct_index").get<int>();
  card.snapshot_hash = j.at("snapshot_hash").get<std::string>();
  card.candidates_validated = j.value("candidates_validated", std::size_t{0});
  for (const auto& o : j.at("options")) {
    QuizOption opt;
    opt.proposal = patch::proposal_from_json(o.at("proposal"));
    opt.explanation = o.at("explanation").get<std::string>();
    opt.validation = validation_from_json(o.at("validation"));
    opt.diff = o.at("diff").get<std::string>();
    card.options.push_back(std::move(opt));
  }
  return card;
}

QuizAnswer answer_quiz(const QuizCard& card, int choice) {
  if (choice < 0 || choice >= static_cast<int>(card.options.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "choice must be between 0 and " + std::to_string(card.options.size() - 1),
                {{"choice", choice}});
  }
  return {choice == card.correct_index, card.options[choice].explanation};
}

// ---- prints ----

namespace {

struct Placement {
  int after_line = 0;
  std::string indent;
};

bool is_identifier(const std::string& s) {
  static const std::regex kIdent(R"([A-Za-z_][A-Za-z0-9_]*)");
  return std::regex_match(s, kIdent) && !pyscan::is_keyword(s);
}

std::string next_code_indent(const std::vector<std::string>& lines, int after, const std::string& fallback) {
  for (int l = after + 1; l <= static_cast<int>(lines.size()); ++l) {
    if (!pyscan::is_blank_or_comment(lines[l - 1])) {
      std::string ind = pyscan::indent_of(lines[l - 1]);
      return ind.size() > fallback.size() ? ind : fallback + "    ";
    }
  }
  return fallback + "    ";
}

Placement place(const std::vector<std::string>& lines, int line, const std::string& variable) {
  const std::string& text = lines[line - 1];
  std::string indent = pyscan::indent_of(text);
  int end = line;
  int depth = pyscan::bracket_delta(text);
  while (depth > 0 && end < static_cast<int>(lines.size())) depth += pyscan::bracket_delta(lines[end++]);

  std::string kw = pyscan::leading_keyword(text);
  std::string code = pyscan::code_part(lines[end - 1]);
  bool header = !code.empty() && code.back() == ':';
  if (header && kw != "if") return {end, next_code_indent(lines, end, indent)};
  auto assigned = pyscan::assigned_names(text);
  if (!header && std::find(assigned.begin(), assigned.end(), variable) != assigned.end()) return {end, indent};
  return {line - 1, indent};
}

}  // namespace

PrintPlan build_print_plan(const runner::SourceSnapshot& snapshot, const std::vector<PrintSuggestion>& suggestions) {
  PrintPlan plan;
  plan.snapshot_hash = snapshot.hash();
  for (const auto& s : suggestions) {
    if (plan.insertions.size() >= kMaxPrints) break;
    auto lines = file_lines(snapshot, s.file);
    if (s.line < 1 || s.line > static_cast<int>(lines.size()) || !is_identifier(s.variable)) continue;
    Placement p = place(lines, s.line, s.variable);
    PrintInsertion ins;
    ins.file = s.file;
    ins.target_line = s.line;
    ins.after_line = p.after_line;
    ins.variable = s.variable;
    ins.reason = s.reason;
    ins.tag = "[CH" + std::to_string(plan.insertions.size() + 1) + "]";
    ins.text = p.indent + "print(\"" + ins.tag + " " + s.variable + " =\", repr(" + s.variable +
               "), file=__import__(\"sys\").stderr)  " + std::string(kDebugMarker);
    plan.insertions.push_back(std::move(ins));
  }

  std::set<std::string> files;
  for (const auto& ins : plan.insertions) files.insert(ins.file);
  for (const auto& file : files) {
    auto original = patch::split_lines(snapshot.content(file));
    patch::Lines out;
    out.trailing_newline = original.trailing_newline;
    std::vector<int> marks;
    auto emit_after = [&](int after) {
      for (const auto& ins : plan.insertions) {
        if (ins.file == file && ins.after_line == after) {
          out.lines.push_back(ins.text);
          marks.push_back(static_cast<int>(out.lines.size()));
        }
      }
    };
    emit_after(0);
    for (int l = 1; l <= static_cast<int>(original.lines.size()); ++l) {
      out.lines.push_back(original.lines[l - 1]);
      emit_after(l);
    }
    if (!original.trailing_newline && !marks.empty() && marks.back() == static_cast<int>(out.lines.size())) {
      out.trailing_newline = true;
    }
    plan.rendered[file] = patch::join_lines(out);
    plan.inserted_at[file] = std::move(marks);
  }
  json key = json::array();
  for (const auto& ins : plan.insertions) key.push_back({ins.file, ins.after_line, ins.text});
  plan.id = sha256_hex(plan.snapshot_hash + key.dump()).substr(0, 12);
  return plan;
}

PrintPlan suggest_prints(const CoverageSpectrum& spectrum, const runner::SourceSnapshot& snapshot,
                         SuggestionProvider& provider) {
  if (spectrum.records.empty() || failing_ids(spectrum).empty()) {
    throw Error(ErrorCode::NoFailingTests, "there are no failing tests to instrument");
  }
  ProviderContext ctx = build_context(spectrum, snapshot);
  std::vector<PrintSuggestion> suggestions;
  try {
    suggestions = provider.propose_prints(ctx);
  } catch (const Error& e) {
    if (!provider_unavailable(e)) throw;
  }
  PrintPlan plan = build_print_plan(snapshot, suggestions);
  if (plan.insertions.empty()) plan = build_print_plan(snapshot, StubProvider().propose_prints(ctx));
  return plan;
}

patch::PatchProposal print_plan_patch(const PrintPlan& plan) {
  std::map<std::pair<std::string, int>, std::vector<std::string>> grouped;
  for (const auto& ins : plan.insertions) grouped[{ins.file, ins.after_line}].push_back(ins.text);
  std::vector<patch::LineEdit> edits;
  for (const auto& [key, texts] : grouped) edits.push_back({key.first, key.second + 1, {}, texts});
  return patch::make_proposal(std::move(edits), "Insert diagnostic print statements", patch::Origin::Provider);
}

json to_json(const PrintPlan& plan) {
  json insertions = json::array();
  for (const auto& i : plan.insertions) {
    insertions.push_back({{"file", i.file},
                          {"target_line", i.target_line},
                          {"after_line", i.after_line},
                          {"variable", i.variable},
                          {"reason", i.reason},
                          {"tag", i.tag},
                          {"text", i.text}});
  }
  return {{"id", plan.id},
          {"snapshot_hash", plan.snapshot_hash},
          {"insertions", std::move(insertions)},
          {"rendered", plan.rendered},
          {"inserted_lines", plan.inserted_at}};
}

PrintPlan print_plan_from_json(const json& j) {
  PrintPlan plan;
  plan.id = j.at("id").get<std::string>();
  plan.snapshot_hash = j.at("snapshot_hash").get<std::string>();
  for (const auto& i : j.at("insertions")) {
    plan.insertions.push_back({i.at("file").get<std::string>(), i.at("target_line").get<int>(),
                               i.at("after_line").get<int>(), i.at("variable").get<std::string>(),
                               i.at("reason").get<std::string>(), i.at("tag").get<std::string>(),
                               i.at("text").get<std::string>()});
  }
  plan.rendered = j.at("rendered").get<std::map<std::string, std::string>>();
  plan.inserted_at = j.at("inserted_lines").get<std::map<std::string, std::vector<int>>>();
  return plan;
}

DebugOutput run_instrumented(const PrintPlan& plan, const runner::ProjectConfig& config) {
  auto current = runner::snapshot_source(config);
  if (current.hash() != plan.snapshot_hash) {
    throw Error(ErrorCode::SnapshotDrift, "the source changed since the print plan was made; run the tests again",
                {{"expected", plan.snapshot_hash}, {"actual", current.hash()}});
  }
  TempDir shadow("codehinter-prints");
  runner::write_shadow_copy(config, shadow.path(), plan.rendered);
  auto run = runner::run_adapter(config, shadow.path(), true);

  DebugOutput out;
  out.syntax_error = run.spectrum.syntax_error;
  for (const auto& r : run.spectrum.records) out.outcomes.push_back({r.test_id, r.outcome});
  for (const auto& d : run.debug) {
    DebugEntry e{d.test_id, -1, d.text};
    for (std::size_t i = 0; i < plan.insertions.size(); ++i) {
      if (d.text.starts_with(plan.insertions[i].tag + " ")) e.insertion = static_cast<int>(i);
    }
    out.lines.push_back(std::move(e));
  }
  return out;
}

json to_json(const DebugOutput& output) {
  json outcomes = json::array();
  for (const auto& o : output.outcomes) outcomes.push_back({{"test_id", o.test_id}, {"outcome", outcome_name(o.outcome)}});
  json lines = json::array();
  for (const auto& l : output.lines) {
    lines.push_back({{"test_id", l.test_id},
                     {"insertion", l.insertion < 0 ? json(nullptr) : json(l.insertion)},
                     {"text", l.text}});
  }
  json syntax = nullptr;
  if (output.syntax_error) {
    syntax = {{"file", output.syntax_error->file},
              {"line", output.syntax_error->line},
              {"message", output.syntax_error->message}};
  }
  return {{"outcomes", std::move(outcomes)}, {"lines", std::move(lines)}, {"syntax_error", std::move(syntax)}};
}

// ---- visualizer ----

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    }
  }
  return out;
}

std::string visualizer_url(const runner::SourceSnapshot& snapshot, const std::string& entry_file, std::size_t limit) {
  auto it = snapshot.files.find(entry_file);
  if (it == snapshot.files.end()) {
    throw Error(ErrorCode::PreconditionViolated, "'" + entry_file + "' is not a subject file", {{"file", entry_file}});
  }
  std::string url = std::string(kVisualizerBase) + "#code=" + percent_encode(it->second.content) +
                    "&cumulative=false&curInstr=0&heapPrimitives=nevernest&mode=display&origin=opt-frontend.js"
                    "&py=3&rawInputLstJSON=%5B%5D&textReferences=false";
  if (url.size() > limit) {
    throw Error(ErrorCode::SourceTooLarge,
                "the visualizer link would be " + std::to_string(url.size()) + " characters (limit " +
                    std::to_string(limit) + ")",
                {{"length", url.size()}, {"limit", limit}});
  }
  return url;
}

// ---- pseudo-code ----

std::string Pseudocode::text() const {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) out += std::to_string(i + 1) + ". " + steps[i] + "\n";
  return out;
}

namespace {

std::string strip_colon(std::string s) {
  if (!s.empty() && s.back() == ':') s.pop_back();
  return std::string(pyscan::trim(s));
}

std::string after_keyword(const std::string& code, const std::string& kw) {
  return strip_colon(code.substr(code.find(kw) + kw.size()));
}

std::optional<std::string> describe(const std::string& code, std::size_t depth) {
  std::string kw = pyscan::leading_keyword(code);
  if (kw == "def") {
    std::string sig = after_keyword(code, "def");
    if (auto arrow = sig.find("->"); arrow != std::string::npos) sig = std::string(pyscan::trim(sig.substr(0, arrow)));
    return "Define " + sig + ".";
  }
  if (kw == "for") {
    std::string rest = after_keyword(code, "for");
    auto in = rest.find(" in ");
    if (in == std::string::npos) return "Loop: " + rest + ".";
    return "Loop over each " + rest.substr(0, in) + " in " + rest.substr(in + 4) + ":";
  }
  if (kw == "while") return "Repeat while " + after_keyword(code, "while") + ":";
  if (kw == "if") return "If " + after_keyword(code, "if") + ":";
  if (kw == "elif") return "Otherwise, if " + after_keyword(code, "elif") + ":";
  if (kw == "else") return "Otherwise:";
  if (kw == "return") {
    std::string value = after_keyword(code, "return");
    return value.empty() ? std::string("Stop and return.") : "Return " + value + ".";
  }
  if (kw == "break") return "Stop the loop.";
  if (kw == "continue") return "Skip to the next iteration.";
  if (!kw.empty() || depth > 1) return std::nullopt;
  auto names = pyscan::assigned_names(code);
  if (names.empty()) return std::nullopt;
  auto tokens = pyscan::tokenize_line(code);
  for (const auto& t : tokens) {
    if (t.kind != pyscan::TokKind::Op) continue;
    std::string value(pyscan::trim(code.substr(t.pos + t.text.size())));
    if (t.text == "=") return "Set " + std::string(pyscan::trim(code.substr(0, t.pos))) + " to " + value + ".";
    if (t.text == "+=") return "Increase " + names.front() + " by " + value + ".";
    if (t.text == "-=") return "Decrease " + names.front() + " by " + value + ".";
  }
  return std::nullopt;
}

std::vector<std::string> sentences(const std::string& statement) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    std::string s(pyscan::trim(current));
    while (!s.empty() && (s.front() == '#' || s.front() == '-' || s.front() == '*')) s = std::string(pyscan::trim(s.substr(1)));
    if (!s.empty()) {
      s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
      if (s.back() != '.' && s.back() != '?' && s.back() != '!' && s.back() != ':') s += '.';
      out.push_back(s);
    }
    current.clear();
  };
  for (std::size_t i = 0; i < statement.size(); ++i) {
    char c = statement[i];
    if (c == '\n') {
      flush();
      continue;
    }
    current += c;
    if ((c == '.' || c == '?' || c == '!') && (i + 1 == statement.size() || statement[i + 1] == ' ' ||
                                                statement[i + 1] == '\n')) {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

std::vector<std::string> structural_pseudocode(const runner::ExerciseSpec& exercise) {
  std::vector<std::string> steps;
  if (exercise.reference_solution && !exercise.reference_solution->empty()) {
    for (const auto& [file, text] : *exercise.reference_solution) {
      auto lines = patch::split_lines(text).lines;
      std::size_t unit = 0;
      for (const auto& l : lines) {
        std::size_t ind = pyscan::indent_of(l).size();
        if (!pyscan::is_blank_or_comment(l) && ind > 0) {
          unit = unit == 0 ? ind : std::min(unit, ind);
        }
      }
      if (unit == 0) unit = 4;
      for (const auto& l : lines) {
        if (pyscan::is_blank_or_comment(l)) continue;
        std::string code = pyscan::code_part(l);
        std::string kw = pyscan::leading_keyword(code);
        if (kw == "import" || kw == "from") continue;
        std::size_t depth = pyscan::indent_of(l).size() / unit;
        if (auto step = describe(std::string(pyscan::trim(code)), depth)) {
          steps.push_back(std::string(2 * depth, ' ') + *step);
        }
      }
    }
  }
  if (steps.empty()) steps = sentences(exercise.statement);
  return steps;
}

Pseudocode pseudocode(const runner::ExerciseSpec& exercise, SuggestionProvider& provider) {
  if (pyscan::trim(exercise.statement).empty()) {
    throw Error(ErrorCode::PreconditionViolated, "the exercise has no problem statement");
  }
  Pseudocode out;
  try {
    out.steps = provider.pseudocode(exercise);
  } catch (const Error& e) {
    if (!provider_unavailable(e)) throw;
  }
  if (out.steps.empty()) {
    out.steps = structural_pseudocode(exercise);
    out.fallback = true;
  }
  return out;
}

// ---- reveal ----

patch::PatchProposal reveal_solution(const runner::ExerciseSpec& exercise, const runner::SourceSnapshot& snapshot) {
  if (!exercise.reference_solution) {
    throw Error(ErrorCode::NoReferenceSolution, "this exercise has no reference solution");
  }
  std::vector<patch::LineEdit> fine;
  std::vector<patch::LineEdit> coarse;
  int changed = 0;
  for (const auto& [file, reference] : *exercise.reference_solution) {
    auto it = snapshot.files.find(file);
    if (it == snapshot.files.end()) continue;
    auto before = patch::split_lines(it->second.content).lines;
    auto after = patch::split_lines(reference).lines;
    for (const auto& h : patch::line_diff(before, after)) {
      changed += static_cast<int>(std::max(h.removed.size(), h.added.size()));
      coarse.push_back({file, h.old_start, h.removed, h.added});
      if (h.removed.size() == h.added.size()) {
        for (std::size_t i = 0; i < h.removed.size(); ++i) {
          fine.push_back({file, h.old_start + static_cast<int>(i), {h.removed[i]}, {h.added[i]}});
        }
      } else {
        fine.push_back(coarse.back());
      }
    }
  }
  if (fine.empty()) throw Error(ErrorCode::NoOpReveal, "the code already matches the reference solution");
  auto& edits = static_cast<int>(fine.size()) <= exercise.max_buggy_lines ? fine : coarse;
  return patch::make_proposal(edits, "Reference solution: " + std::to_string(changed) + " line(s) differ.",
                              patch::Origin::Solution);
}

}  // namespace codehinter::assist
