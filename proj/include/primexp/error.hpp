#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace primexp {

enum class ErrorCode {
  InvalidRange,
  RangeTooLarge,
  InvalidArgument,
  TableGap,
  FloorTooLarge,
  DIsSquare,
  QTooSmall,
  EmptyWindow,
  YExceedsX,
  QExceedsX,
  QExceedsSqrtX,
  QTooLarge,
  NonCoprime,
  SeparationViolated,
  GridViolatesPrecondition,
  ConfigInvalid,
  NoAdmissibleWindow,
  CacheFormat,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every precondition failure in the library surfaces as this exception;
/// `code()` identifies the failure class for callers that dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace primexp
