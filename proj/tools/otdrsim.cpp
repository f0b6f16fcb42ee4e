// SPDX-License-Identifier: Apache-2.0

// Command-line front end: sequence export and the three experiment runners.

#include "polprobe/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct ExperimentArgs {
    std::string config_path;
    std::string preset = "desk";
    std::vector<std::string> overrides;
    std::string output_dir;
};

void add_experiment_options(CLI::App* cmd, ExperimentArgs& args)
{
    cmd->add_option("-c,--config", args.config_path, "key = value configuration file");
    cmd->add_option("-p,--preset", args.preset, "base preset (desk, field)")->capture_default_str();
    cmd->add_option("-s,--set", args.overrides, "override, key=value (repeatable)");
    cmd->add_option("-o,--output-dir", args.output_dir, "output directory");
}

polprobe::ExperimentConfig resolve(const ExperimentArgs& args)
{
    polprobe::ExperimentConfig cfg = polprobe::preset(args.preset);
    if (!args.config_path.empty())
        cfg = polprobe::load_config(args.config_path, cfg);
    for (const auto& kv : args.overrides)
        polprobe::apply_override(cfg, kv);
    if (!args.output_dir.empty())
        cfg.output_dir = args.output_dir;
    polprobe::validate(cfg);
    return cfg;
}

void report(const polprobe::RunSummary& summary)
{
    for (const auto& f : summary.files)
        std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dual-polarization phase-OTDR probing simulator"};
    app.require_subcommand(1);

    std::string scheme_name;
    std::size_t size_param = 0;
    double symbol_rate = 50e6;
    std::string out_path;
    auto* gen = app.add_subcommand("generate", "write one probing period as CSV");
    gen->add_option("scheme", scheme_name, "golay, cazac or sweep")->required();
    gen->add_option("size", size_param, "recursion depth K (golay), order M (cazac) or period length (sweep)")
        ->required();
    gen->add_option("-r,--symbol-rate", symbol_rate, "symbol rate in Hz")->capture_default_str();
    gen->add_option("-o,--output", out_path, "output file (default stdout)");

    ExperimentArgs alias_args, tf_args, curve_args;
    auto* alias = app.add_subcommand("aliasing", "estimated intensity over the full receiver window");
    add_experiment_options(alias, alias_args);
    auto* tf = app.add_subcommand("tf", "time-frequency signatures of the probes");
    add_experiment_options(tf, tf_args);
    auto* curve = app.add_subcommand("error-curve", "estimation error versus probed fiber length");
    add_experiment_options(curve, curve_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    try {
        if (*gen) {
            polprobe::Scheme scheme;
            try {
                scheme = polprobe::parse_scheme(scheme_name);
            } catch (const polprobe::ArgumentError& e) {
                std::cerr << "error: " << e.what() << "\n\n" << gen->help();
                return kExitConfig;
            }
            if (out_path.empty()) {
                polprobe::generate_sequence(std::cout, scheme, size_param, symbol_rate);
            } else {
                std::ofstream os(out_path, std::ios::binary);
                if (!os)
                    throw polprobe::IoError("cannot open '" + out_path + "' for writing");
                polprobe::generate_sequence(os, scheme, size_param, symbol_rate);
                if (!os.flush())
                    throw polprobe::IoError("write to '" + out_path + "' failed");
            }
        } else if (*alias) {
            report(polprobe::run_aliasing_experiment(resolve(alias_args)));
        } else if (*tf) {
            report(polprobe::run_tf_signature(resolve(tf_args)));
        } else if (*curve) {
            report(polprobe::run_error_vs_length(resolve(curve_args)));
        }
    } catch (const polprobe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const polprobe::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
