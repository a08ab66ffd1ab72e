#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bethe::cli {

// Runs one CLI invocation (argv without the program name).
// Exit codes: 0 success, 1 task failure (including failed verifications and
// resource guards), 2 validation error (bad arguments, malformed files).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bethe::cli
