// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_LINKSIM_HPP
#define SLP_LINKSIM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "slp/channel.hpp"
#include "slp/constellation.hpp"
#include "slp/precoder.hpp"
#include "slp/rng.hpp"

namespace slp {

enum class PrecoderKind { MCIPM, ZF };

struct SimConfig {
    int M = 2;
    int K = 2;
    int order = 4;
    Eigen::VectorXd zeta;   // per-user linear SNR targets
    double sigma2 = 1.0;    // receiver noise variance
    double gamma0 = 1.0;    // average channel power
    int n_channels = 100;
    int n_slots = 10;
    std::uint64_t seed = 1;
    PrecoderKind precoder = PrecoderKind::MCIPM;
    bool compute_bound = false;
    int threads = 1;        // affects wall clock only, never results
};

// Per-sweep-point averages. Identities that hold by construction:
// effective_rate_j = bits_per_symbol * (1 - ser_j) and
// energy_efficiency = sum_j effective_rate_j / avg_tx_power.
struct MetricsRecord {
    double avg_tx_power = 0.0;           // mean of per-slot |x|^2 over good slots
    Eigen::VectorXd ser;                 // per user
    Eigen::VectorXd ser_ci_halfwidth;    // 95% normal-approximation interval
    Eigen::VectorXd effective_rate;      // bits/symbol
    double energy_efficiency = 0.0;      // bits/symbol per unit power
    std::optional<double> ci_lower_bound;  // mean multicast SDP trace
    long n_slots_total = 0;              // successfully solved slots
    long n_fail = 0;                     // slots with non-optimal precoder status
    std::vector<long> error_counts;      // per user
    bool flagged = false;                // n_fail > 1% of attempted slots
};

struct SlotResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    double power = 0.0;
    std::vector<int> detected;
};

// Precode one slot, pass it through the channel with CN(0, sigma^2) noise,
// normalize by sigma*sqrt(zeta_j) at each receiver and hard-detect.
// noise_rng == nullptr runs the slot noiselessly (diagnostic mode).
SlotResult run_slot(const ChannelMatrix& H, const SymbolSlot& slot,
                    const SnrTargets& targets, PrecoderKind precoder,
                    RngStream* noise_rng);

enum class SweepVariable { ZetaTh, Gamma0 };

struct SweepSpec {
    SweepVariable variable = SweepVariable::ZetaTh;
    std::vector<double> grid;  // linear values
};

// One MetricsRecord per grid point. Channel, symbol, and noise substreams
// are keyed by (seed, trial, slot) only, so grid points and modulation
// orders see paired draws and results do not depend on the thread count.
std::vector<MetricsRecord> run_sweep(const SimConfig& config, const SweepSpec& sweep);

}  // namespace slp

#endif
