#include "shockloop/error.hpp"

namespace shockloop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BadPosition: return "BadPosition";
    case ErrorCode::BadMesh: return "BadMesh";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::MeshMismatch: return "MeshMismatch";
    case ErrorCode::BadSolverConfig: return "BadSolverConfig";
    case ErrorCode::ZeroWaveSpeed: return "ZeroWaveSpeed";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooManyEvents: return "TooManyEvents";
    case ErrorCode::OutOfRegion: return "OutOfRegion";
    case ErrorCode::InvalidRegime: return "InvalidRegime";
    case ErrorCode::NoShock: return "NoShock";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::BadDelay: return "BadDelay";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace shockloop
