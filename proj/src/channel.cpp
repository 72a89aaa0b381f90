// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/channel.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slp/rng.hpp"

namespace slp {

ChannelMatrix generate_rayleigh(int K, int M, double gamma0, std::uint64_t seed,
                                std::uint32_t trial) {
    if (K < 1 || M < 1) {
        throw std::invalid_argument("generate_rayleigh: dimensions must be >= 1");
    }
    if (!(gamma0 > 0.0)) {
        throw std::invalid_argument("generate_rayleigh: gamma0 must be > 0");
    }
    ChannelMatrix H;
    H.entries.resize(K, M);
    H.gamma0 = gamma0;
    H.seed = seed;
    const double amp = std::sqrt(gamma0);
    for (int j = 0; j < K; ++j) {
        RngStream rng(seed, kStreamChannel, trial, static_cast<std::uint32_t>(j));
        for (int m = 0; m < M; ++m) {
            H.entries(j, m) = amp * rng.complex_normal(1.0);
        }
    }
    return H;
}

Eigen::MatrixXcd cross_correlation(const ChannelMatrix& H) {
    const int K = H.users();
    Eigen::VectorXd norms(K);
    for (int j = 0; j < K; ++j) {
        norms(j) = H.entries.row(j).norm();
        if (!(norms(j) > 0.0)) {
            throw std::invalid_argument("cross_correlation: row " + std::to_string(j) +
                                        " has zero norm");
        }
    }
    Eigen::MatrixXcd rho(K, K);
    for (int j = 0; j < K; ++j) {
        for (int k = 0; k < K; ++k) {
            rho(j, k) =
                (H.entries.row(j) * H.entries.row(k).adjoint())(0) / (norms(j) * norms(k));
        }
    }
    return rho;
}

void save_channel_csv(const ChannelMatrix& H, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_channel_csv: cannot open " + path);
    char buf[64];
    for (int j = 0; j < H.users(); ++j) {
        for (int m = 0; m < H.antennas(); ++m) {
            const auto z = H.entries(j, m);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", z.real(), z.imag());
            out << (m == 0 ? "" : ",") << buf;
        }
        out << "\n";
    }
}

ChannelMatrix load_channel_csv(const std::string& path, double gamma0,
                               std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_channel_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() % 2 != 0) {
            throw std::runtime_error("load_channel_csv: odd value count in row");
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error("load_channel_csv: empty file");
    const int K = static_cast<int>(rows.size());
    const int M = static_cast<int>(rows[0].size() / 2);
    ChannelMatrix H;
    H.entries.resize(K, M);
    H.gamma0 = gamma0;
    H.seed = seed;
    for (int j = 0; j < K; ++j) {
        if (static_cast<int>(rows[j].size()) != 2 * M) {
            throw std::runtime_error("load_channel_csv: ragged rows");
        }
        for (int m = 0; m < M; ++m) {
            H.entries(j, m) = {rows[j][2 * m], rows[j][2 * m + 1]};
        }
    }
    return H;
}

}  // namespace slp
