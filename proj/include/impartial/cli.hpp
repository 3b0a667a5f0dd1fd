#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace impartial::cli {

/// Runs one subcommand (fit, compare, bootstrap, simulate). `args` excludes
/// the program name. Returns 0 on success, 1 for data or numeric errors and
/// 2 for usage errors; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace impartial::cli
