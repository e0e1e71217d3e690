#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lrt::cli {

/// Runs one subcommand (args excludes the program name). Writes a JSON
/// report to `out` and diagnostics to `err`. Returns 0 on success, 2 on a
/// usage error, 1 on a runtime error.
int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrt::cli
