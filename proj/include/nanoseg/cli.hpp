#pragma once

#include <iosfwd>

namespace nanoseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // at least one input or output failed
inline constexpr int kExitUsage = 2;    // bad flags or config

/// Entry point of the `nanoseg` tool: analyze, generate and evaluate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace nanoseg::cli
