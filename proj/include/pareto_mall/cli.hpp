#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pareto_mall {

/// Runs one command line (args excludes the program name). Returns the
/// process exit status: 0 success, 1 data/file errors, 2 usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pareto_mall
