#ifndef LOWEROP_CLI_HPP
#define LOWEROP_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace lowerop::cli {

/// Runs the command-line front end. `args` excludes the program name.
/// Reports go to `out` as JSON (or the text rendering); exit codes:
/// 0 success, 1 domain error, 2 I/O, parse, or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lowerop::cli

#endif
