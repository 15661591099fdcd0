#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zdsys {

enum class ErrorCode {
  InvalidSpec,
  MixedSystems,
  InvalidPoint,
  MaxStepsExceeded,
  NotSubordinate,
  SaturationFailure,
  InvalidSystem,
  BaseMismatch,
  ConstructionFailed,
  IncompatiblePair,
  InvalidFiberPoint,
  NotMeasurable,
  NotInvariant,
  NeedsRefinement,
  NotFiner,
  NoConvergence,
  NotUnitary,
  DegenerateEigenbasis,
  NotCompactlySupported,
  PartitionFailure,
  PreconditionFailed,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure surfaced by the library. The code is stable and is what the
/// CLI writes into its JSON error body.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zdsys
