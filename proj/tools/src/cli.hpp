#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cegabor::cli {

enum ExitCode : int { ok = 0, parse_error = 2, precondition = 3, internal = 4 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cegabor::cli
