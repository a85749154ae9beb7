#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hasse {

enum ExitCode : int { kExitPass = 0, kExitMathFailure = 1, kExitUsage = 2 };

/// Runs one hasse_forge command.  args excludes the program name.  "-" as
/// --in reads `in`; without --out the report goes to `out`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hasse
