#pragma once

#include <stdexcept>
#include <string>

namespace sheafctx {

enum class ErrorCode {
  // scenario
  AntichainViolation,
  CoverIncomplete,
  EmptyContext,
  UnknownLabel,
  NotASubcontext,
  // distribution
  SemiringMismatch,
  NotNormalized,
  PartialMap,
  OverlappingContexts,
  // empirical
  ScenarioMismatch,
  NonRationalModel,
  MissingPair,
  OutcomeNotNumeric,
  // quantum
  IndexOutOfRange,
  NotUnitVector,
  DimensionMismatch,
  NonCommutingContext,
  InconsistentSharedObservable,
  NonCommutingParties,
  SpectrumOutOfRange,
  InvalidState,
  // spacetime
  InvalidCone,
  NotOnePlusOne,
  ZeroProjection,
  OverlappingFactors,
  RegionsShareSites,
  RegionsNotSeparated,
  NonCommutingAcrossRegions,
  // io / cli
  ParseError,
};

const char* error_code_name(ErrorCode code);

/// Domain error carrying a stable code for programmatic handling.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sheafctx
