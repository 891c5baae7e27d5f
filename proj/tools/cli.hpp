#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace idealpoly::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;     // usage or input error
inline constexpr int kExitNegative = 2;  // e.g. not realizable
inline constexpr int kExitNumeric = 3;   // numerical failure, selftest failure

// Runs one command. Primary output goes to `out` (or the --output file),
// errors go to `err` as single-line JSON objects with a "code" field.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idealpoly::cli
