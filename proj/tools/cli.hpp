#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcpkit {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitFail = 2,
    kExitNotApplicable = 3,
    kExitInconclusive = 4,
};

/// Runs one pcpkit invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pcpkit
