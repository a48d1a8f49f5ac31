#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stein/config.hpp"
#include "stein/report.hpp"

namespace stein {

/// CLI exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitViolation = 4;

struct CommandOutput {
    BoundReport report;
    int exit_code = kExitOk;
};

/// Theorem ids understood by cmd_bound.
std::vector<std::string> theorem_ids();

/// Closed-form bounds over the cartesian grid of cfg.params (names sorted, last fastest).
CommandOutput cmd_bound(const RunConfig& cfg);
/// Moments, tails, the Stein identity and every matching bound for cfg.model.
CommandOutput cmd_simulate(const RunConfig& cfg);
/// Verdicts of the selected bounds against the estimates; exit 4 on any violation.
CommandOutput cmd_verify(const RunConfig& cfg);
CommandOutput run_command(const RunConfig& cfg);

/// Full CLI: argument parsing, config loading, flag overrides, output. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stein
