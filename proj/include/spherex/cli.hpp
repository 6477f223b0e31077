#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spherex::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, failure = 1, invalid = 2, capacity = 3, degenerate = 4 };

/// Runs one command line (args excludes the program name). JSON reports go
/// to out, human summaries and errors to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spherex::cli
