#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symkit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kSuccess = 0, kInputError = 2, kInternalError = 3 };

/// Runs one command line (args excludes the program name). Tables go to out,
/// diagnostics to err. JSON goes to the --json path, or to out for "-".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symkit::cli
