#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace holdp::cli {

/// Runs the holdp command line. `args` excludes the program name.
/// Data goes to files or `out`; diagnostics go to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace holdp::cli
