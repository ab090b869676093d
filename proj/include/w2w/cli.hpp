#pragma once

#include <ostream>

namespace w2w::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kSoftMiss = 1;   // query: some word not found
inline constexpr int kUsage = 2;      // bad flags, invalid or empty input
inline constexpr int kIoFormat = 3;   // unreadable or malformed files

// Entry point of the `w2w` tool: build | query | evaluate | sample.
// Data goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace w2w::cli
