#pragma once

#include <string>
#include <vector>

namespace exbound {

/// Entry point behind the command line tool; argv includes the program name.
/// Returns 0 on success, 2 for configuration errors, 3 for solver failures.
int run_cli(const std::vector<std::string>& argv);

}  // namespace exbound
