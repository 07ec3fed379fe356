#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace soscert {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitCondition = 2,
  kExitNumeric = 3,
  kExitVerification = 4,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soscert
