// crnet: command-line front end for the coupled-resonator network simulator.
//
//   crnet <topology|verify|fig2|dephasing|fidelity> --scenario run.json [--out path]
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input,
// 3 numerical failure.

#include "crnet/commands.hpp"
#include "crnet/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <utility>

int main(int argc, char** argv) {
    CLI::App app{"Photon transfer in coupled-resonator networks"};
    app.require_subcommand(1);

    std::string scenario_path;
    crnet::CliOptions opts;
    std::string out;
    double tolerance = 0.0, time = 0.0, time_factor = 0.0;
    std::uint64_t seed = 0;

    app.add_option("--scenario", scenario_path, "Scenario JSON file");
    auto* out_opt = app.add_option("--out", out, "Write the report to this path");
    auto* tol_opt = app.add_option("--tolerance", tolerance, "SWAP deviation tolerance");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_flag("--check-monotone", opts.check_monotone,
                 "fig2: fail if fidelity rises with T or falls with lambda");
    auto* time_opt = app.add_option("--time", time, "verify: evolution time");
    auto* factor_opt =
        app.add_option("--time-factor", time_factor, "verify: evolution time as a multiple of tau");
    time_opt->excludes(factor_opt);

    const std::pair<const char*, const char*> commands[] = {
        {"topology", "network summary as JSON"},
        {"verify", "check the antipodal SWAP at the transfer time"},
        {"fig2", "fidelity sweep over lambda and temperature (CSV)"},
        {"dephasing", "dephasing table for one tau and temperature (CSV)"},
        {"fidelity", "average and fixed-input fidelity (CSV)"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? crnet::exit_ok : crnet::exit_bad_input;
    }

    if (*out_opt) opts.out = out;
    if (*tol_opt) opts.tolerance = tolerance;
    if (*seed_opt) opts.seed = seed;
    if (*time_opt) opts.time = time;
    if (*factor_opt) opts.time_factor = time_factor;

    crnet::Scenario scenario;
    if (!scenario_path.empty()) {
        try {
            scenario = crnet::load_scenario(scenario_path);
        } catch (const crnet::InputError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return crnet::exit_bad_input;
        }
    }

    const std::string command = app.get_subcommands().front()->get_name();
    return crnet::run_command(command, scenario, opts, std::cout, std::cerr);
}
