#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace normalfan {

/// Exit codes of the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_input_error = 2 };

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace normalfan
