#pragma once

#include "config.hpp"

#include <optional>
#include <ostream>
#include <string>

namespace lwreg::cli {

struct CommandOptions {
    std::optional<double> mc2;
    int max_order = 8;
    std::string expr;
};

/// Exit codes.
constexpr int kPass = 0;
constexpr int kVerdictFailure = 1;
constexpr int kConfigError = 2;

/// Runs one subcommand ("kinematics", "fields eval", "associate",
/// "selfenergy", "renormalize", "distalg solve", "distalg verify", "check").
/// Results go to the configured output file or `out`; notes to `err`.
/// Library errors propagate; `exit_code_for` maps them.
int run(const std::string& command, const RunConfig& cfg, const CommandOptions& opts,
        std::ostream& out, std::ostream& err);

/// kConfigError for input errors (parse, validation, out-of-range targets),
/// kVerdictFailure for everything else.
int exit_code_for(const std::string& error_kind);

} // namespace lwreg::cli
