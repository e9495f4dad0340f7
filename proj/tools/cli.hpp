#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cascade::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kConfigError = 3,
    kInternalError = 4,
};

/// Runs one `cascade` invocation; argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace cascade::cli
