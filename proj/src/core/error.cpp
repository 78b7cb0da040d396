// Copyright 2026 The CodeHinter Authors
// SPDX-License-Identifier: Apache-2.0

#include "codehinter/error.hpp"

namespace codehinter {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySpectrum: return "empty_spectrum";
    case ErrorCode::MalformedLocation: return "malformed_location";
    case ErrorCode::UnknownFormula: return "unknown_formula";
    case ErrorCode::NoFailingTests: return "no_failing_tests";
    case ErrorCode::SchemaMismatch: return "schema_mismatch";
    case ErrorCode::ValidationError: return "validation_error";
    case ErrorCode::SubjectMismatch: return "subject_mismatch";
    case ErrorCode::AdapterFailure: return "adapter_failure";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::TraceInvalid: return "trace_invalid";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::ConfigInvalid: return "config_invalid";
    case ErrorCode::ProviderUnavailable: return "provider_unavailable";
    case ErrorCode::NoValidatedFix: return "no_validated_fix";
    case ErrorCode::ValidationBudgetExceeded: return "validation_budget_exceeded";
    case ErrorCode::InsufficientDistractors: return "insufficient_distractors";
    case ErrorCode::IndexOutOfRange: return "index_out_of_range";
    case ErrorCode::SnapshotDrift: return "snapshot_drift";
    case ErrorCode::StaleProposal: return "stale_proposal";
    case ErrorCode::SourceTooLarge: return "source_too_large";
    case ErrorCode::PreconditionViolated: return "precondition_violated";
    case ErrorCode::NoReferenceSolution: return "no_reference_solution";
    case ErrorCode::NoOpReveal: return "noop_reveal";
    case ErrorCode::IllegalTransition: return "illegal_transition";
    case ErrorCode::CorruptLog: return "corrupt_log";
    case ErrorCode::SessionNotFound: return "session_not_found";
    case ErrorCode::RevealGated: return "reveal_gated";
    case ErrorCode::UnknownProposal: return "unknown_proposal";
    case ErrorCode::CorpusInvalid: return "corpus_invalid";
    case ErrorCode::BindFailure: return "bind_failure";
    case ErrorCode::BadRequest: return "bad_request";
    case ErrorCode::NotFound: return "not_found";
  }
  return "unknown";
}

}  // namespace codehinter
