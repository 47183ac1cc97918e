#pragma once

#include <ostream>

#include "run_config.hpp"

namespace dickeqfi::cli {

enum ExitCode : int { exit_ok = 0, exit_numeric = 1, exit_usage = 2 };

// Each command writes its data to `out` and diagnostics to `err`, and
// returns an exit code. Usage problems surface as UsageError.
int cmd_exchange(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_loss(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_parity(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on the command held by the config; maps library exceptions
/// to exit codes and prints them to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dickeqfi::cli
