#pragma once

#include "sgrowth/run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sgrowth {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_cap = 2,
    exit_verification = 3,
};

/// Each command writes its main output to --out (or `out`) and diagnostics
/// to `err`, and returns an exit code.
int cmd_count(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_betti(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_asym(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments (args[0] is the program name), then dispatches.
/// `--config FILE` loads a JSON object of flag values first; explicit flags
/// override it.
RunConfig parse_command_line(const std::vector<std::string>& args);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sgrowth
