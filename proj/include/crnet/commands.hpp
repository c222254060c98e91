#pragma once

#include "crnet/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace crnet {

enum ExitCode : int {
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_bad_input = 2,
    exit_numerical_failure = 3,
};

/// Command-line overrides; each takes precedence over the scenario's run block.
struct CliOptions {
    std::optional<std::string> out;
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    std::optional<double> time;
    std::optional<double> time_factor;
    bool check_monotone = false;
};

// Each command writes its report to the --out path when one is given and to
// `out` otherwise; diagnostics go to `err`. Input problems throw InputError,
// numerical ones NumericalError; otherwise the return value is the exit code.
int cmd_topology(const Scenario& s, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const Scenario& s, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fig2(const Scenario& s, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_dephasing(const Scenario& s, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fidelity(const Scenario& s, const CliOptions& opts, std::ostream& out, std::ostream& err);

/// Dispatch by subcommand name, mapping exceptions to exit codes and
/// diagnostics to `err`.
int run_command(const std::string& name, const Scenario& s, const CliOptions& opts,
                std::ostream& out, std::ostream& err);

}  // namespace crnet
