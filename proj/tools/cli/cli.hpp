#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace queuetail::cli {

/// Entry point shared by the `queuetail` binary and the tests. `args`
/// excludes the program name. Returns the process exit code:
/// 0 ok, 1 input error, 2 numerical failure, 3 verification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace queuetail::cli
