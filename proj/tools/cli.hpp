#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reserve_lab::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kValidationError = 2;
inline constexpr int kViolation = 3;
inline constexpr int kBoundExceeded = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reserve_lab::cli
