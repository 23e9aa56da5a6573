#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shockloop {

enum class ErrorCode {
  // flux
  NoRoot,
  NotConverged,
  // grids and initial data
  BadPosition,
  BadMesh,
  OutOfRange,
  MeshTooCoarse,
  MeshMismatch,
  // solver
  BadSolverConfig,
  ZeroWaveSpeed,
  NonFinite,
  // oracle
  TooManyEvents,
  OutOfRegion,
  // stability analysis
  InvalidRegime,
  NoShock,
  WindowEmpty,
  NonPositiveSpeed,
  // delay equations
  BoundViolated,
  BadDelay,
  HypothesisFailed,
  // configuration and io
  ParseError,
  ValidationError,
  IoError,
};

/// Error families map to distinct process exit codes in the CLI.
enum class ErrorFamily { Config = 2, Precondition = 3, Numerical = 4, Io = 5 };

constexpr ErrorFamily family_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
      return ErrorFamily::Config;
    case ErrorCode::IoError:
      return ErrorFamily::Io;
    case ErrorCode::NotConverged:
    case ErrorCode::NonFinite:
    case ErrorCode::TooManyEvents:
    case ErrorCode::NoShock:
    case ErrorCode::WindowEmpty:
    case ErrorCode::NonPositiveSpeed:
    case ErrorCode::BoundViolated:
    case ErrorCode::BadDelay:
      return ErrorFamily::Numerical;
    default:
      return ErrorFamily::Precondition;
  }
}

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorFamily family() const noexcept { return family_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace shockloop
