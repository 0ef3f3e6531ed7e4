#pragma once

#include <stdexcept>
#include <string>

namespace etgbt {

enum class ErrorCode {
  DimensionMismatch,
  NotPositiveDefinite,
  NotControllable,
  NotObservable,
  DegenerateObservation,
  NumericalSingularity,
  CholeskyFailure,
  NotPSD,
  BoundDiverged,
  HorizonTooLarge,
  InvalidParameter,
  PlacementFailure,
  InvalidStart,
  NoSolution,
  ScenarioInvalid,
  ReplayMismatch,
};

const char* to_string(ErrorCode code);

/// Base exception for all library failures. `code()` identifies the failure
/// class so callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace etgbt
