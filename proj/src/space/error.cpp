#include "zdsys/error.hpp"

namespace zdsys {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::MixedSystems: return "MixedSystems";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::NotSubordinate: return "NotSubordinate";
    case ErrorCode::SaturationFailure: return "SaturationFailure";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::IncompatiblePair: return "IncompatiblePair";
    case ErrorCode::InvalidFiberPoint: return "InvalidFiberPoint";
    case ErrorCode::NotMeasurable: return "NotMeasurable";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NeedsRefinement: return "NeedsRefinement";
    case ErrorCode::NotFiner: return "NotFiner";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::DegenerateEigenbasis: return "DegenerateEigenbasis";
    case ErrorCode::NotCompactlySupported: return "NotCompactlySupported";
    case ErrorCode::PartitionFailure: return "PartitionFailure";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

}  // namespace zdsys
