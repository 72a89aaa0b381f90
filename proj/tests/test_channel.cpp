// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include <doctest.h>

#include <cstdio>
#include <string>

#include "slp/channel.hpp"

using namespace slp;

TEST_CASE("fixed seed gives bit-identical channels") {
    const auto a = generate_rayleigh(2, 2, 1.0, 77);
    const auto b = generate_rayleigh(2, 2, 1.0, 77);
    CHECK(a.entries == b.entries);
    const auto c = generate_rayleigh(2, 2, 1.0, 78);
    CHECK(a.entries != c.entries);
    const auto d = generate_rayleigh(2, 2, 1.0, 77, 1);
    CHECK(a.entries != d.entries);
}

TEST_CASE("entry power matches the average channel power") {
    // direct statistic over 1e5 draws
    double sum = 0.0;
    long n = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const auto H = generate_rayleigh(4, 100, 1.0, 123, trial);
        sum += H.entries.cwiseAbs2().sum();
        n += H.entries.size();
    }
    CHECK(n == 100000);
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));

    double sum4 = 0.0;
    long n4 = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const auto H = generate_rayleigh(4, 100, 4.0, 123, trial);
        sum4 += H.entries.cwiseAbs2().sum();
        n4 += H.entries.size();
    }
    CHECK(sum4 / n4 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("invalid generation arguments") {
    CHECK_THROWS_AS(generate_rayleigh(0, 2, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_rayleigh(2, 0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_rayleigh(2, 2, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_rayleigh(2, 2, -1.0, 1), std::invalid_argument);
}

TEST_CASE("cross correlation of orthogonal and collinear rows") {
    ChannelMatrix H;
    H.entries.resize(2, 2);
    SUBCASE("orthogonal rows") {
        H.entries << std::complex<double>(1, 0), std::complex<double>(0, 0),
            std::complex<double>(0, 0), std::complex<double>(0, 2);
        const auto rho = cross_correlation(H);
        CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.0));
        CHECK(std::abs(rho(1, 0)) == doctest::Approx(0.0));
    }
    SUBCASE("collinear rows") {
        H.entries << std::complex<double>(1, 1), std::complex<double>(2, 0),
            std::complex<double>(2, 2), std::complex<double>(4, 0);
        const auto rho = cross_correlation(H);
        CHECK(rho(0, 1).real() == doctest::Approx(1.0));
        CHECK(rho(0, 1).imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("cross correlation is hermitian with unit diagonal and bounded entries") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const auto H = generate_rayleigh(3, 4, 2.0, seed);
        const auto rho = cross_correlation(H);
        for (int j = 0; j < 3; ++j) {
            CHECK(rho(j, j).real() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(rho(j, j).imag()) < 1e-12);
            for (int k = 0; k < 3; ++k) {
                CHECK(std::abs(rho(j, k)) <= 1.0 + 1e-12);
                CHECK(std::abs(rho(j, k) - std::conj(rho(k, j))) < 1e-12);
            }
        }
    }
}

TEST_CASE("zero row is reported by index") {
    ChannelMatrix H;
    H.entries = Eigen::MatrixXcd::Zero(2, 2);
    H.entries(0, 0) = {1.0, 0.0};
    CHECK_THROWS_WITH_AS(cross_correlation(H), doctest::Contains("row 1"),
                         std::invalid_argument);
}

TEST_CASE("csv fixture round trip is exact") {
    const auto H = generate_rayleigh(3, 2, 1.5, 99);
    const std::string path = "channel_fixture_test.csv";
    save_channel_csv(H, path);
    const auto back = load_channel_csv(path, H.gamma0, H.seed);
    CHECK(back.entries == H.entries);
    std::remove(path.c_str());
}
