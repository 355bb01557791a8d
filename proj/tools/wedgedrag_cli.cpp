#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wedgedrag/commands.hpp"
#include "wedgedrag/errors.hpp"
#include "wedgedrag/study_config.hpp"

namespace {

using wedgedrag::StudyConfig;
namespace cli = wedgedrag::cli;

// Flag name -> config key. Flags are applied as text after the config file, so they go
// through the same parser (and the same unit checks) as file values.
const std::map<std::string, std::string> kFlagKeys = {
    {"--theta", "wedge.theta"},     {"--length", "wedge.length"},   {"--beta", "gas.beta"},
    {"--rho", "gas.rho"},           {"--velocity", "study.velocities"},
    {"--t-min", "study.t_min"},     {"--t-max", "study.t_max"},     {"--t-points", "study.t_points"},
    {"--samples", "mc.samples"},    {"--seed", "mc.seed"},          {"--output", "output.path"},
    {"--format", "output.format"},  {"--force", "study.forces"},
};

const std::map<std::string, std::string> kDescriptions = {
    {"friction-curve", "tabulate F0, g, g_inf, delta_g and F_total over (V, t)"},
    {"decay-study", "fit the power-law decay of delta_g in t"},
    {"oracle-compare", "compare quadrature with the Monte Carlo particle estimate"},
    {"stationary-check", "scan d(delta_g)/dT for a sign change"},
    {"limiting-velocity", "solve E = F0(V) + g_inf(V) for the long-time velocity"},
};

int write_body(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body << std::flush;
        return cli::kExitOk;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << body) || !out.flush()) {
        std::cerr << "config error: output.path: cannot write " << path << "\n";
        return cli::kExitConfig;
    }
    return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Drag on a wedge moving through a rarefied gas"};
    app.set_version_flag("--version", std::string(cli::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::map<std::string, std::string> flag_values;
    bool synthetic = false;

    for (const auto& name : cli::command_names()) {
        CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
        sub->add_option("--config", config_path, "flat key = value configuration file");
        for (const auto& [flag, key] : kFlagKeys) {
            sub->add_option(flag, flag_values[flag], key);
        }
        if (name == "decay-study") {
            sub->add_flag("--synthetic", synthetic, "fit the 7 t^-5 test curve instead");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    StudyConfig cfg;
    try {
        if (!config_path.empty()) cfg = wedgedrag::load_config_file(config_path, cfg);
        for (const auto& [flag, key] : kFlagKeys) {
            if (chosen->count(flag) > 0) wedgedrag::apply_config_value(cfg, key, flag_values[flag]);
        }
        if (synthetic) cfg.synthetic = true;
    } catch (const wedgedrag::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cli::kExitConfig;
    }

    const cli::CommandResult result = cli::run_command(chosen->get_name(), cfg);
    if (!result.body.empty()) {
        const int io = write_body(cfg.output_path, result.body);
        if (io != cli::kExitOk) return io;
    }
    std::cerr << result.verdict << "\n";
    return result.exit_code;
}
