// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>

#include <httplib.h>

#include "codehinter/error.hpp"
#include "codehinter/provider.hpp"

namespace codehinter::assist {

using nlohmann::json;

namespace {

constexpr const char* kSystemPrompt =
    "You are a debugging tutor for novice Python programmers. Ground every statement in the "
    "fault-localization context you are given and never write out a complete solution. "
    "Reply with a single JSON object only.";

constexpr const char* kChatPrompt =
    "You are a debugging tutor for novice Python programmers. Answer the student's question in a few "
    "sentences of plain text, grounded in the fault-localization context you are given. Do not write "
    "out a complete solution.";

[[noreturn]] void unavailable(const std::string& why) {
  throw Error(ErrorCode::ProviderUnavailable, "suggestion provider unavailable: " + why);
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

std::vector<std::string> split_text(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t nl = text.find('\n', start);
    out.push_back(text.substr(start, nl == std::string::npos ? std::string::npos : nl - start));
    if (nl == std::string::npos) return out;
    start = nl + 1;
  }
}

}  // namespace

LiveProvider::LiveProvider(LiveProviderConfig config) : config_(std::move(config)) {}

std::optional<LiveProviderConfig> LiveProvider::config_from_env() {
  std::string url = env("CODEHINTER_LLM_URL");
  if (url.empty()) return std::nullopt;
  LiveProviderConfig c;
  c.base_url = url;
  c.model = env("CODEHINTER_LLM_MODEL");
  c.api_key = env("CODEHINTER_LLM_KEY");
  return c;
}

std::string LiveProvider::complete(const std::string& system, const std::string& user, bool json_reply) {
  // Split "scheme://host[:port]/prefix" into the client origin and path prefix.
  std::string origin = config_.base_url;
  std::string prefix;
  if (auto scheme = origin.find("://"); scheme != std::string::npos) {
    if (auto slash = origin.find('/', scheme + 3); slash != std::string::npos) {
      prefix = origin.substr(slash);
      origin.resize(slash);
    }
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  if (!client.is_valid()) unavailable("invalid endpoint '" + config_.base_url + "'");
  client.set_connection_timeout(std::min(config_.timeout_seconds, 10), 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);

  json body = {{"model", config_.model},
               {"temperature", 0},
               {"messages", json::array({{{"role", "system"}, {"content", system}},
                                         {{"role", "user"}, {"content", user}}})}};
  if (json_reply) body["response_format"] = {{"type", "json_object"}};

  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  auto res = client.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) unavailable("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) unavailable("endpoint returned HTTP " + std::to_string(res->status));

  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) unavailable("reply is not JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    unavailable("reply has no choices[0].message.content");
  }
}

json LiveProvider::complete_json(const std::string& system, const std::string& user) {
  std::string content = complete(system, user, true);
  json j = json::parse(content, nullptr, false);
  if (j.is_discarded() || !j.is_object()) unavailable("model reply is not a JSON object");
  return j;
}

std::vector<std::string> LiveProvider::explain_locations(const ProviderContext& context) {
  json j = complete_json(kSystemPrompt,
                         "For each location, in order, explain in one or two sentences why it may be faulty. "
                         "Mention the location as file:line. Reply as {\"explanations\": [string]}.\n" +
                             to_json(context).dump());
  try {
    auto out = j.at("explanations").get<std::vector<std::string>>();
    if (out.size() != context.locations.size()) unavailable("wrong number of explanations");
    return out;
  } catch (const json::exception&) {
    unavailable("malformed explanations");
  }
}

std::vector<FixSuggestion> LiveProvider::propose_fixes(const ProviderContext& context) {
  json j = complete_json(kSystemPrompt,
                         "Propose up to six single-line changes, each either a plausible fix or a plausible "
                         "mistake a student might try. old_text must equal the current line exactly. Reply as "
                         "{\"fixes\": [{\"file\", \"line\", \"old_text\", \"new_text\", \"explanation\"}]}.\n" +
                             to_json(context).dump());
  std::vector<FixSuggestion> out;
  try {
    for (const auto& f : j.at("fixes")) {
      FixSuggestion s;
      s.edit.file = f.at("file").get<std::string>();
      s.edit.line = f.at("line").get<int>();
      s.edit.old_lines = split_text(f.at("old_text").get<std::string>());
      if (!f.at("new_text").is_null()) s.edit.new_lines = split_text(f.at("new_text").get<std::string>());
      s.explanation = f.value("explanation", std::string());
      if (!is_normalized_path(s.edit.file) || s.edit.line < 1) continue;
      out.push_back(std::move(s));
    }
  } catch (const json::exception&) {
    unavailable("malformed fixes");
  }
  return out;
}

std::vector<PrintSuggestion> LiveProvider::propose_prints(const ProviderContext& context) {
  json j = complete_json(kSystemPrompt,
                         "Suggest up to three variables whose values the student should print to understand the "
                         "failure. Reply as {\"prints\": [{\"file\", \"line\", \"variable\", \"reason\"}]}.\n" +
                             to_json(context).dump());
  std::vector<PrintSuggestion> out;
  try {
    for (const auto& p : j.at("prints")) {
      out.push_back({p.at("file").get<std::string>(), p.at("line").get<int>(), p.at("variable").get<std::string>(),
                     p.value("reason", std::string())});
    }
  } catch (const json::exception&) {
    unavailable("malformed prints");
  }
  return out;
}

std::vector<std::string> LiveProvider::pseudocode(const runner::ExerciseSpec& exercise) {
  json j = complete_json(kSystemPrompt,
                         "Write numbered pseudo-code steps that help a student understand this problem without "
                         "giving away code. Reply as {\"steps\": [string]}.\n" +
                             json{{"statement", exercise.statement}}.dump());
  try {
    auto steps = j.at("steps").get<std::vector<std::string>>();
    if (steps.empty()) unavailable("no steps");
    return steps;
  } catch (const json::exception&) {
    unavailable("malformed steps");
  }
}

std::string LiveProvider::chat(const std::string& message, const ProviderContext& context) {
  return complete(kChatPrompt, "Context: " + to_json(context).dump() + "\nStudent: " + message, false);
}

}  // namespace codehinter::assist
