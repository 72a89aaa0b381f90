// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "slp/experiment.hpp"

namespace {

void apply_overrides(slp::ExperimentConfig& cfg, bool have_seed, std::uint64_t seed,
                     const std::string& out, int threads) {
    if (have_seed) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (threads > 0) cfg.threads = threads;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slpsim: symbol-level constructive-interference precoding simulator"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool have_seed = false;
    std::string out_path;
    int threads = 0;
    app.add_flag_callback("--version", [] {
        std::cout << "slpsim 1.0.0\n";
        std::exit(0);
    });
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "override the RNG seed")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--out", out_path, "override the output CSV path");
        sub->add_option("--threads", threads,
                        "worker threads (wall clock only, never results)");
    };

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config file");
    run_cmd->add_option("config", config_path, "config file path")->required();
    add_common(run_cmd);

    std::string preset_name;
    std::string config_dir = "configs";
    auto* preset_cmd = app.add_subcommand("preset", "run a shipped preset (fig2|fig3|fig4)");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_option("--config-dir", config_dir, "directory holding preset configs");
    add_common(preset_cmd);

    bool quick = false;
    auto* validate_cmd = app.add_subcommand("validate", "run the invariant suite");
    validate_cmd->add_flag("--quick", quick, "reduced instance counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            return slp::run_validation(quick, std::cout) == 0 ? 0 : 1;
        }
        slp::ExperimentConfig cfg;
        if (run_cmd->parsed()) {
            cfg = slp::parse_config(config_path);
        } else {
            cfg = slp::parse_config(config_dir + "/" + preset_name + ".cfg");
        }
        apply_overrides(cfg, have_seed, seed, out_path, threads);
        return slp::run_experiment(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
