// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_EXPERIMENT_HPP
#define SLP_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slp/linksim.hpp"

namespace slp {

enum class ExperimentKind { PowerSweep, EeVsChannel, EeVsTarget, Validate };

// Parsed key = value experiment description. All SNR/power quantities are
// dB in the file and converted with 10^(dB/10) internally.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::PowerSweep;
    int M = 2;
    int K = 2;
    std::vector<int> orders{4};
    double sigma2_db = 0.0;
    double gamma0_db = 0.0;
    double zeta_db = 10.0;                 // shared target when the sweep is over gamma0
    std::map<int, double> zeta_db_order;   // per-order override (e.g. zeta_db_8 = 9)
    double sweep_start_db = 0.0;
    double sweep_stop_db = 20.0;
    double sweep_step_db = 4.0;
    int n_channels = 100;
    int n_slots = 10;
    std::uint64_t seed = 1;
    PrecoderKind precoder = PrecoderKind::MCIPM;
    bool compute_bound = false;
    int threads = 1;
    std::string out = "results.csv";
};

double db_to_linear(double db);
double linear_to_db(double v);

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_stream(std::istream& in, const std::string& name);

std::vector<double> sweep_grid_db(const ExperimentConfig& cfg);

// Runs the configured experiment and writes the CSV (or the validation
// report for kind == Validate). Returns a process exit status.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

// Invariant suite: KKT certification, oracle equivalence, zero-forcing
// dominance, target scaling, noiseless detection. Prints one line per
// check; returns the number of failed checks.
int run_validation(bool quick, std::ostream& log);

// CSV schema helpers (stable column order, C-locale formatting).
std::string csv_header(int K);
std::string csv_row(double variable_db, int order, const MetricsRecord& rec);

}  // namespace slp

#endif
