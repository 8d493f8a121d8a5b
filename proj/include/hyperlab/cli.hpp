#pragma once

// Config-driven experiment runner behind the command-line tool.

#include "hyperlab/report.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlab::cli {

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_bound_violation = 3,
    exit_numerical_failure = 4,
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string version();

/// Command names in dispatch order.
const std::vector<std::string>& commands();
/// Keys accepted in the params block of `command`.
const std::vector<std::string>& param_keys(const std::string& command);
bool needs_seed(const std::string& command);

/// {"command": ..., "seed": ..., "params": {...}}; unknown keys are errors.
struct RunConfig {
    std::string command;
    std::optional<std::uint64_t> seed;
    report::Json params = report::Json::object();
};

RunConfig parse_config(const report::Json& j);

struct CsvFile {
    std::string name;  // file name inside the output directory
    std::string content;
};

struct RunResult {
    int exit_code = exit_ok;
    report::Json report;  // always has command, version, config, status
    std::vector<CsvFile> csv;
    std::string message;  // error text for non-zero exits
};

/// Runs one command. Never throws for bad input: errors map to exit codes.
RunResult run(const RunConfig& cfg);

/// Reads the config file, applies a seed override, runs and writes
/// <out>/<command>.json plus any CSV files.
int run_file(const std::string& config_path, std::optional<std::uint64_t> seed_override, const std::string& out_dir,
             bool quiet, std::ostream& log);

}  // namespace hyperlab::cli
