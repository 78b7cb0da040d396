// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

// The operations both front ends expose. Each mutating call runs under the
// session lock and records exactly one event; read calls record nothing.
// Results are the JSON bodies the HTTP service returns.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "codehinter/provider.hpp"
#include "codehinter/session.hpp"
#include "codehinter/spectrum.hpp"

namespace codehinter {

inline constexpr std::string_view kVersion = "0.1.0";

class Workbench {
 public:
  Workbench(std::filesystem::path data_dir, std::shared_ptr<assist::SuggestionProvider> provider);

  session::SessionStore& store() { return store_; }
  assist::SuggestionProvider& provider() { return *provider_; }

  std::string create_session(const runner::ProjectConfig& config);

  /// {session_id, state, report, snapshot_hash, runs, helper_uses, quiz, quiz_answered, plan, last_seq}
  nlohmann::json view(const std::string& id) const;

  nlohmann::json run_e2e(const std::string& id);
  nlohmann::json locate(const std::string& id, spectrum::Formula formula = spectrum::kDefaultFormula,
                        std::size_t top = spectrum::kDefaultTopK);
  nlohmann::json quiz(const std::string& id);
  nlohmann::json answer(const std::string& id, int choice);
  nlohmann::json prints(const std::string& id);
  nlohmann::json run_prints(const std::string& id);
  /// `body` holds either "proposal_id" (an option of the active card) or a
  /// full "proposal".
  nlohmann::json apply_patch(const std::string& id, const nlohmann::json& body);
  nlohmann::json solution(const std::string& id);
  /// With `record` false nothing is logged, but legality is still checked.
  nlohmann::json pseudocode(const std::string& id, bool record);
  nlohmann::json visualizer(const std::string& id, const std::optional<std::string>& file, bool record);
  nlohmann::json chat(const std::string& id, const std::string& text);

  nlohmann::json events(const std::string& id) const;
  nlohmann::json usage(const std::string& id) const;

 private:
  session::SessionStore store_;
  std::shared_ptr<assist::SuggestionProvider> provider_;
};

}  // namespace codehinter
