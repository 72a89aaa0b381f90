// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_RNG_HPP
#define SLP_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace slp {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// A block is a pure function of (counter, key), so substreams can be
// assigned per (trial, user, slot) and results do not depend on which
// thread draws them.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::array<std::uint32_t, 4> next{
                static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(p0)};
            ctr = next;
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Stream classes keep the independent random inputs of the simulator on
// disjoint counter ranges.
enum : std::uint32_t {
    kStreamGeneric = 0,
    kStreamChannel = 1,
    kStreamSymbols = 2,
    kStreamNoise = 3,
};

// One logical random stream, identified by (seed, class, id_a, id_b).
// Draws are sequential within the stream; streams never collide.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint32_t stream_class, std::uint32_t id_a,
              std::uint32_t id_b = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          base_{0, id_a, id_b, stream_class} {}

    std::uint32_t next_u32() {
        if (avail_ == 0) {
            auto ctr = base_;
            ctr[0] = block_;
            buf_ = Philox4x32::block(ctr, key_);
            ++block_;
            avail_ = 4;
        }
        return buf_[4 - avail_--];
    }

    // Uniform on (0,1); never returns 0 or 1 exactly.
    double uniform() {
        return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32;
    }

    // Uniform integer in [0, n). Multiply-shift; the bias of ~n/2^32 is
    // irrelevant for constellation-sized n.
    std::uint32_t uniform_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<std::uint64_t>(next_u32()) * n) >> 32);
    }

    // Standard normal via Box-Muller; draws come in deterministic pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Circularly-symmetric complex Gaussian with total variance `variance`.
    std::complex<double> complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = s * normal();
        const double im = s * normal();
        return {re, im};
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> base_;
    std::array<std::uint32_t, 4> buf_{};
    std::uint32_t block_ = 0;
    int avail_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace slp

#endif
