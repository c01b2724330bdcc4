#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace llagraph::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kNotConverged = 3,
    kDegenerate = 4,
};

/// Parses and runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace llagraph::cli
