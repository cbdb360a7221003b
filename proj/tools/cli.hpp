#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace satfarey::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kUsage = 2,
};

/// Parses argv (argv[0] is the program name) and runs one subcommand.
/// Reports go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satfarey::cli
