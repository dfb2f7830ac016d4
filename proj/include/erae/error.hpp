#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace erae {

enum class ErrorCode {
  NotSquare,
  NotHermitian,
  NotPSD,
  NotNormalized,
  NotIsometry,
  DimensionMismatch,
  DimensionTooLarge,
  RankMismatch,
  InvalidAlpha,
  AlphaBelowCritical,
  DomainError,
  OutOfDomain,
  InvalidSpec,
  InvalidState,
  NonFiniteFunction,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for every library failure; `code()` is the
/// machine-readable reason that the CLI forwards in its error field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace erae
