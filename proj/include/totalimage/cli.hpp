#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace totalimage {

// Exit statuses of the command line tool.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1, // internal error, oracle disagreement, bad precondition
  exit_parse = 2,
  exit_limit = 3,
  exit_genericity = 4,
};

// args excludes the program name. Output goes to out, diagnostics to err.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace totalimage
