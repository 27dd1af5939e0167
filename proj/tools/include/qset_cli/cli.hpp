#pragma once

#include <iosfwd>

namespace qset::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_io = 4,
};

// Parses the command line, runs the command and maps failures onto exit
// codes. Diagnostics go to `err`, progress lines to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qset::cli
