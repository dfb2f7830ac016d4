#include "erae/error.hpp"

namespace erae {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotIsometry: return "NotIsometry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::AlphaBelowCritical: return "AlphaBelowCritical";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NonFiniteFunction: return "NonFiniteFunction";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

}  // namespace erae
