#ifndef SEIFERT_CLI_HPP
#define SEIFERT_CLI_HPP

// Front end for the seifert-obstruct tool. Exit codes: 0 the property holds,
// 1 it fails, 2 input error (unreadable or invalid files, unmet preconditions).

#include <iosfwd>
#include <string>
#include <vector>

namespace seifert {

enum ExitCode : int { kExitOk = 0, kExitFails = 1, kExitInput = 2 };

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seifert

#endif  // SEIFERT_CLI_HPP
