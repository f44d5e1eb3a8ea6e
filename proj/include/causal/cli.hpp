#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causal::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kExpectationMismatch = 1;  // demo numbers outside tolerance
inline constexpr int kDomainError = 2;          // usage, parse or validation errors
inline constexpr int kIoError = 3;

// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causal::cli
