#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace resnet::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

// Runs the command line `args` (args[0] is the program name). Reports go to `out`
// (or the -o file), diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resnet::cli
