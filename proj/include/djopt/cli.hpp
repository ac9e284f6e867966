#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace djopt {

enum ExitCode { kExitOk = 0, kExitViolated = 2, kExitSchema = 3, kExitDisagreement = 4 };

// args[0] is the program name. JSON goes to `out` (only with --json), the
// human-readable summary to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace djopt
