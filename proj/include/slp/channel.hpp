// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_CHANNEL_HPP
#define SLP_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace slp {

// Quasi-static downlink channel. Row j is the 1xM channel of user j.
struct ChannelMatrix {
    Eigen::MatrixXcd entries;  // K x M
    double gamma0 = 1.0;       // average channel power, linear
    std::uint64_t seed = 0;

    int users() const { return static_cast<int>(entries.rows()); }
    int antennas() const { return static_cast<int>(entries.cols()); }
};

// i.i.d. Rayleigh fading: each entry CN(0, gamma0). Entries for user j come
// from the substream (seed, kStreamChannel, trial, j), so draws are
// reproducible independent of evaluation order.
ChannelMatrix generate_rayleigh(int K, int M, double gamma0, std::uint64_t seed,
                                std::uint32_t trial = 0);

// rho_jk = h_j h_k^H / (|h_j||h_k|). Hermitian with unit diagonal.
Eigen::MatrixXcd cross_correlation(const ChannelMatrix& H);

// Regression-fixture dump: one CSV row per user, interleaved re/im values.
void save_channel_csv(const ChannelMatrix& H, const std::string& path);
ChannelMatrix load_channel_csv(const std::string& path, double gamma0 = 1.0,
                               std::uint64_t seed = 0);

}  // namespace slp

#endif
