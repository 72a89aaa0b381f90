// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/linksim.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "slp/sdp.hpp"

namespace slp {

SlotResult run_slot(const ChannelMatrix& H, const SymbolSlot& slot,
                    const SnrTargets& targets, PrecoderKind precoder,
                    RngStream* noise_rng) {
    SlotResult out;
    const PrecodeSolution sol = precoder == PrecoderKind::MCIPM
                                    ? precode_min_power(H, slot, targets)
                                    : precode_zf_symbol(H, slot, targets);
    out.status = sol.status;
    if (sol.status != SolveStatus::Optimal) return out;
    out.power = sol.power;

    const int K = H.users();
    out.detected.resize(K);
    for (int j = 0; j < K; ++j) {
        std::complex<double> y = (H.entries.row(j) * sol.x)(0);
        if (noise_rng != nullptr) {
            y += noise_rng->complex_normal(targets.sigma * targets.sigma);
        }
        const double gain = targets.sigma * std::sqrt(targets.zeta(j));
        out.detected[j] = detect(*slot.spec, y / gain);
    }
    return out;
}

namespace {

struct ChannelTally {
    double power_sum = 0.0;
    long good_slots = 0;
    long failed_slots = 0;
    std::vector<long> errors;
    double bound = 0.0;
    bool bound_ok = false;
};

// All randomness for channel c comes from substreams keyed by c (and slot),
// never by grid point or modulation order, so sweeps stay paired.
ChannelTally simulate_channel(const SimConfig& cfg, const ConstellationSpec& spec,
                              const SnrTargets& targets, double gamma0,
                              std::uint32_t trial, bool want_bound) {
    ChannelTally tally;
    tally.errors.assign(cfg.K, 0);
    const ChannelMatrix H = generate_rayleigh(cfg.K, cfg.M, gamma0, cfg.seed, trial);

    if (want_bound) {
        const SdpProblem bound_problem =
            make_multicast_problem(H, targets.zeta, targets.sigma);
        const SdpResult bound = solve_multicast_sdp(bound_problem);
        if (bound.status == SolveStatus::Optimal) {
            tally.bound = bound.trace_value;
            tally.bound_ok = true;
        }
    }

    SymbolSlot slot;
    slot.spec = &spec;
    slot.indices.resize(cfg.K);
    const auto order = static_cast<std::uint32_t>(spec.size());
    for (int s = 0; s < cfg.n_slots; ++s) {
        RngStream sym_rng(cfg.seed, kStreamSymbols, trial, static_cast<std::uint32_t>(s));
        for (int j = 0; j < cfg.K; ++j) {
            slot.indices[j] = static_cast<int>(sym_rng.uniform_below(order));
        }
        RngStream noise_rng(cfg.seed, kStreamNoise, trial, static_cast<std::uint32_t>(s));
        const SlotResult r = run_slot(H, slot, targets, cfg.precoder, &noise_rng);
        if (r.status != SolveStatus::Optimal) {
            ++tally.failed_slots;
            continue;
        }
        tally.power_sum += r.power;
        ++tally.good_slots;
        for (int j = 0; j < cfg.K; ++j) {
            if (r.detected[j] != slot.indices[j]) ++tally.errors[j];
        }
    }
    return tally;
}

MetricsRecord reduce_tallies(const SimConfig& cfg, const ConstellationSpec& spec,
                             const std::vector<ChannelTally>& tallies, bool want_bound) {
    MetricsRecord rec;
    rec.error_counts.assign(cfg.K, 0);
    double power_sum = 0.0, bound_sum = 0.0;
    long good = 0, failed = 0, bounds = 0;
    for (const auto& t : tallies) {
        power_sum += t.power_sum;
        good += t.good_slots;
        failed += t.failed_slots;
        for (int j = 0; j < cfg.K; ++j) rec.error_counts[j] += t.errors[j];
        if (t.bound_ok) {
            bound_sum += t.bound;
            ++bounds;
        }
    }
    rec.n_slots_total = good;
    rec.n_fail = failed;
    rec.flagged = failed > (good + failed) / 100;
    rec.avg_tx_power = good > 0 ? power_sum / static_cast<double>(good) : 0.0;
    rec.ser.resize(cfg.K);
    rec.ser_ci_halfwidth.resize(cfg.K);
    rec.effective_rate.resize(cfg.K);
    double rate_sum = 0.0;
    for (int j = 0; j < cfg.K; ++j) {
        const double p = good > 0 ? static_cast<double>(rec.error_counts[j]) /
                                        static_cast<double>(good)
                                  : 0.0;
        rec.ser(j) = p;
        rec.ser_ci_halfwidth(j) =
            good > 0 ? 1.96 * std::sqrt(std::max(p * (1.0 - p), 0.0) /
                                        static_cast<double>(good))
                     : 0.0;
        rec.effective_rate(j) = spec.bits_per_symbol * (1.0 - p);
        rate_sum += rec.effective_rate(j);
    }
    rec.energy_efficiency = rec.avg_tx_power > 0.0 ? rate_sum / rec.avg_tx_power : 0.0;
    if (want_bound && bounds > 0) {
        rec.ci_lower_bound = bound_sum / static_cast<double>(bounds);
    }
    return rec;
}

}  // namespace

std::vector<MetricsRecord> run_sweep(const SimConfig& config, const SweepSpec& sweep) {
    if (sweep.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    if (config.n_channels < 1 || config.n_slots < 1) {
        throw std::invalid_argument("run_sweep: counts must be >= 1");
    }
    const ConstellationSpec spec = build_constellation(config.order);

    std::vector<MetricsRecord> records;
    records.reserve(sweep.grid.size());
    for (double value : sweep.grid) {
        SnrTargets targets;
        targets.sigma = std::sqrt(config.sigma2);
        double gamma0 = config.gamma0;
        if (sweep.variable == SweepVariable::ZetaTh) {
            targets.zeta = Eigen::VectorXd::Constant(config.K, value);
        } else {
            targets.zeta = config.zeta;
            gamma0 = value;
        }
        if (targets.zeta.size() != config.K) {
            throw std::invalid_argument("run_sweep: zeta length does not match K");
        }

        std::vector<ChannelTally> tallies(config.n_channels);
        const int n_threads = std::max(1, config.threads);
        if (n_threads == 1) {
            for (int c = 0; c < config.n_channels; ++c) {
                tallies[c] = simulate_channel(config, spec, targets, gamma0,
                                              static_cast<std::uint32_t>(c),
                                              config.compute_bound);
            }
        } else {
            std::vector<std::thread> pool;
            std::atomic<int> next{0};
            for (int t = 0; t < n_threads; ++t) {
                pool.emplace_back([&] {
                    for (;;) {
                        const int c = next.fetch_add(1);
                        if (c >= config.n_channels) return;
                        tallies[c] = simulate_channel(config, spec, targets, gamma0,
                                                      static_cast<std::uint32_t>(c),
                                                      config.compute_bound);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }
        records.push_back(reduce_tallies(config, spec, tallies, config.compute_bound));
    }
    return records;
}

}  // namespace slp
