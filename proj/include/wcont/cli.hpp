#ifndef WCONT_CLI_HPP
#define WCONT_CLI_HPP

#include <iosfwd>

namespace wcont {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNumeric = 2,
  kExitInvariant = 3,
};

/// Parses argv and runs one subcommand. Results go to `out` (or the --out
/// file); diagnostics go to `err` as "E<code>: message".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wcont

#endif  // WCONT_CLI_HPP
