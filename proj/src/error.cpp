#include "primexp/error.hpp"

namespace primexp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidRange: return "invalid-range";
    case ErrorCode::RangeTooLarge: return "range-too-large";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::TableGap: return "table-gap";
    case ErrorCode::FloorTooLarge: return "floor-too-large";
    case ErrorCode::DIsSquare: return "d-is-a-square";
    case ErrorCode::QTooSmall: return "Q-too-small";
    case ErrorCode::EmptyWindow: return "empty-window";
    case ErrorCode::YExceedsX: return "y-exceeds-x";
    case ErrorCode::QExceedsX: return "q-exceeds-x";
    case ErrorCode::QExceedsSqrtX: return "Q-exceeds-sqrt-x";
    case ErrorCode::QTooLarge: return "q-too-large";
    case ErrorCode::NonCoprime: return "non-coprime";
    case ErrorCode::SeparationViolated: return "separation-violated";
    case ErrorCode::GridViolatesPrecondition: return "grid-violates-precondition";
    case ErrorCode::ConfigInvalid: return "config-invalid";
    case ErrorCode::NoAdmissibleWindow: return "no-admissible-window";
    case ErrorCode::CacheFormat: return "cache-format";
  }
  return "unknown";
}

}  // namespace primexp
