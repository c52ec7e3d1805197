#pragma once

#include <string>
#include <vector>

namespace parkshare::cli {

inline constexpr const char* kToolName = "parkshare";
inline constexpr const char* kToolVersion = "0.1.0";

// Dispatches one invocation. Subcommands: estimate-cdf, dimension,
// dimension-curve, simulate-events, allocate, solve. Every run writes its
// primary artifacts plus a manifest recording the resolved configuration,
// the seed, and digests of the input files; re-running the same
// invocation reproduces all outputs byte for byte.
//
// Exit status: 0 on success, 1 on a domain or input error, 2 on a usage
// error.
int run(const std::vector<std::string>& args);

// argv-style convenience wrapper used by main().
int run(int argc, char** argv);

} // namespace parkshare::cli
