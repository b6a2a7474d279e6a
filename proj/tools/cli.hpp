#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jigsaw::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one command line (args exclude the program name). Exit codes: 0 on
/// success, 1 on runtime failure, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace jigsaw::cli
