#ifndef QGAS_CLI_COMMANDS_HPP
#define QGAS_CLI_COMMANDS_HPP

#include <string>
#include <vector>

#include "qgas/cli/config.hpp"

namespace qgas::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitOracleFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitConvergenceFailure = 3;

int cmd_zeros_poly(const RunConfig& cfg);
int cmd_zeros_beta(const RunConfig& cfg);
int cmd_correlator(const RunConfig& cfg);
int cmd_oracle_check(const RunConfig& cfg);
int cmd_figure1(const RunConfig& cfg);

/// Full command-line entry point (subcommand dispatch, config layering,
/// exit-code mapping).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace qgas::cli

#endif
