#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reserve_lab {

enum class ErrorCode {
  QuotaOverflow,
  InvalidQuota,
  DuplicateId,
  MalformedMembership,
  DuplicateScore,
  NegativeScore,
  BadPrecedence,
  UnknownCategory,
  InvalidPolicy,
  IntransitiveTie,
  ForeignAssignment,
  UniverseTooLarge,
  NonReplayingWitness,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reserve_lab
