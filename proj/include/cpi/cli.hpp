#pragma once

#include <string>
#include <vector>

namespace cpi {

// Full command-line entry point (argv without the program name).
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
int cli_run(const std::vector<std::string>& args);

} // namespace cpi
