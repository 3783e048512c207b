#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flans {

enum class ErrorCode {
  BadDim,
  OddN,
  TooSmallN,
  ShapeMismatch,
  GridMismatch,
  NotHermitian,
  NegativePowerOnMean,
  NegativeTime,
  InconsistentPair,
  InvariantViolation,
  Diverged,
  NoContraction,
  EmptyMesh,
  BadEvalTime,
  TooFewRecords,
  EmptyWindow,
  WrongRegime,
  BadParams,
  MissingKey,
  BadValue,
  RegimeViolation,
  BadMagic,
  VersionMismatch,
  CorruptPayload,
  EmptyOutput,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the time stepper; carries the step index at which blow-up was detected.
class DivergedError : public Error {
 public:
  DivergedError(long step, double t, const std::string& what)
      : Error(ErrorCode::Diverged, what), step_(step), t_(t) {}

  long step() const noexcept { return step_; }
  double time() const noexcept { return t_; }

 private:
  long step_;
  double t_;
};

}  // namespace flans
