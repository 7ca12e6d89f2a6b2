#ifndef NETCATALYST_TOOLS_CLI_HPP_
#define NETCATALYST_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace netcatalyst::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNotConverged = 3 };

/// Runs one subcommand. argv[0] is the program name.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace netcatalyst::cli

#endif  // NETCATALYST_TOOLS_CLI_HPP_
