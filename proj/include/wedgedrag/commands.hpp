#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wedgedrag/study_config.hpp"

namespace wedgedrag::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitAssertion = 4,
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string body;     // the report, CSV or JSON
    std::string verdict;  // one-line summary for the terminal
};

// Each runner throws on failure; run_command maps exceptions to exit codes.
CommandResult run_friction_curve(const StudyConfig& cfg);
CommandResult run_decay_study(const StudyConfig& cfg);
CommandResult run_oracle_compare(const StudyConfig& cfg);
CommandResult run_stationary_check(const StudyConfig& cfg);
CommandResult run_limiting_velocity(const StudyConfig& cfg);

const std::vector<std::string>& command_names();

// Validates cfg, runs the named command and converts any exception into an exit code with
// the message in `verdict`. ConfigError -> 2, ObstructionViolation -> 4, anything else -> 3.
CommandResult run_command(std::string_view name, const StudyConfig& cfg);

}  // namespace wedgedrag::cli
