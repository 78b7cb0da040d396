// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace codehinter {

/// Every failure the core can report. The HTTP layer and the CLI map these
/// onto machine-readable codes via `error_code_name`.
enum class ErrorCode {
  // spectrum
  EmptySpectrum,
  MalformedLocation,
  UnknownFormula,
  NoFailingTests,
  // trace
  SchemaMismatch,
  ValidationError,
  SubjectMismatch,
  // runner
  AdapterFailure,
  Timeout,
  TraceInvalid,
  IoError,
  ConfigInvalid,
  // assist
  ProviderUnavailable,
  NoValidatedFix,
  ValidationBudgetExceeded,
  InsufficientDistractors,
  IndexOutOfRange,
  SnapshotDrift,
  StaleProposal,
  SourceTooLarge,
  PreconditionViolated,
  NoReferenceSolution,
  NoOpReveal,
  // session
  IllegalTransition,
  CorruptLog,
  SessionNotFound,
  RevealGated,
  UnknownProposal,
  // corpus
  CorpusInvalid,
  // host
  BindFailure,
  BadRequest,
  NotFound,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, nlohmann::json details = nullptr)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const { return code_; }
  const nlohmann::json& details() const { return details_; }

 private:
  ErrorCode code_;
  nlohmann::json details_;
};

}  // namespace codehinter
