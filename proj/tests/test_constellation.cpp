// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "slp/constellation.hpp"

using namespace slp;

namespace {

// Locate a point by its raw odd-integer grid coordinates (a + b i)/sqrt(2) * scale.
int index_of_raw(const ConstellationSpec& spec, int a, int b) {
    const std::complex<double> want(spec.scale * a / std::sqrt(2.0),
                                    spec.scale * b / std::sqrt(2.0));
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        if (std::abs(spec.points[i] - want) < 1e-12) return static_cast<int>(i);
    }
    REQUIRE(false);
    return -1;
}

// Brute-force nearest point with the lower-index tie rule, as an independent
// check of the threshold slicer.
int nearest_point(const ConstellationSpec& spec, std::complex<double> s) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const double d = std::norm(s - spec.points[i]);
        if (d < best_d - 1e-15) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("constellations are unit average power with the documented scales") {
    for (int order : {4, 8, 16}) {
        const auto spec = build_constellation(order);
        CHECK(spec.order == order);
        CHECK(static_cast<int>(spec.size()) == order);
        double mean_power = 0.0;
        for (auto p : spec.points) mean_power += std::norm(p);
        mean_power /= static_cast<double>(spec.size());
        CHECK(mean_power == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(build_constellation(4).scale == doctest::Approx(1.0));
    CHECK(build_constellation(8).scale == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(build_constellation(16).scale == doctest::Approx(1.0 / std::sqrt(5.0)));
    CHECK(build_constellation(4).bits_per_symbol == 2);
    CHECK(build_constellation(8).bits_per_symbol == 3);
    CHECK(build_constellation(16).bits_per_symbol == 4);
}

TEST_CASE("level grids are rectangular products") {
    const auto q8 = build_constellation(8);
    CHECK(q8.real_levels.size() == 4);
    CHECK(q8.imag_levels.size() == 2);
    const auto q4 = build_constellation(4);
    CHECK(q4.real_levels.size() == 2);
    CHECK(q4.imag_levels.size() == 2);
    const auto q16 = build_constellation(16);
    CHECK(q16.real_levels.size() == 4);
    CHECK(q16.imag_levels.size() == 4);
    // every (real, imag) pair appears exactly once, in lexicographic order
    int idx = 0;
    for (double re : q16.real_levels) {
        for (double im : q16.imag_levels) {
            CHECK(q16.points[idx] == std::complex<double>(re, im));
            ++idx;
        }
    }
}

TEST_CASE("unsupported order names the accepted ones") {
    CHECK_THROWS_WITH_AS(build_constellation(32),
                         doctest::Contains("4, 8, 16"), std::invalid_argument);
}

TEST_CASE("coordinate classification") {
    const auto q16 = build_constellation(16);
    SUBCASE("inner 16-qam point is interior on both axes") {
        const auto [re, im] = classify(q16, index_of_raw(q16, 1, 1));
        CHECK(re.cls == CoordClass::Interior);
        CHECK(im.cls == CoordClass::Interior);
        CHECK(re.sign == 1);
        CHECK(im.sign == 1);
    }
    SUBCASE("corner 16-qam point is extreme with matching signs") {
        const auto [re, im] = classify(q16, index_of_raw(q16, 3, -3));
        CHECK(re.cls == CoordClass::Extreme);
        CHECK(im.cls == CoordClass::Extreme);
        CHECK(re.sign == 1);
        CHECK(im.sign == -1);
    }
    SUBCASE("4-qam points are all corners") {
        const auto q4 = build_constellation(4);
        for (int i = 0; i < 4; ++i) {
            const auto [re, im] = classify(q4, i);
            CHECK(re.cls == CoordClass::Extreme);
            CHECK(im.cls == CoordClass::Extreme);
        }
    }
    SUBCASE("8-qam mixes interior real with extreme imag") {
        const auto q8 = build_constellation(8);
        const auto [re, im] = classify(q8, index_of_raw(q8, 1, -1));
        CHECK(re.cls == CoordClass::Interior);
        CHECK(im.cls == CoordClass::Extreme);
        CHECK(im.sign == -1);
    }
}

TEST_CASE("classification counts per constellation") {
    auto count = [](const ConstellationSpec& spec, CoordClass re, CoordClass im) {
        int n = 0;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const auto [c_re, c_im] = classify(spec, static_cast<int>(i));
            if (c_re.cls == re && c_im.cls == im) ++n;
        }
        return n;
    };
    const auto q4 = build_constellation(4);
    CHECK(count(q4, CoordClass::Extreme, CoordClass::Extreme) == 4);
    const auto q16 = build_constellation(16);
    CHECK(count(q16, CoordClass::Interior, CoordClass::Interior) == 4);
    CHECK(count(q16, CoordClass::Extreme, CoordClass::Extreme) == 4);
    CHECK(count(q16, CoordClass::Interior, CoordClass::Extreme) +
              count(q16, CoordClass::Extreme, CoordClass::Interior) ==
          8);
    const auto q8 = build_constellation(8);
    CHECK(count(q8, CoordClass::Extreme, CoordClass::Extreme) == 4);
    CHECK(count(q8, CoordClass::Interior, CoordClass::Extreme) == 4);
    CHECK(count(q8, CoordClass::Interior, CoordClass::Interior) == 0);
}

TEST_CASE("detection round trip and unbounded outer regions") {
    for (int order : {4, 8, 16}) {
        const auto spec = build_constellation(order);
        for (std::size_t i = 0; i < spec.size(); ++i) {
            CHECK(detect(spec, spec.points[i]) == static_cast<int>(i));
        }
    }
    const auto q16 = build_constellation(16);
    const double max_level = q16.real_levels.back();
    const int idx = detect(q16, {10.0 * max_level, q16.imag_levels[1]});
    const auto [re, im] = classify(q16, idx);
    CHECK(re.cls == CoordClass::Extreme);
    CHECK(re.sign == 1);
    CHECK(q16.points[idx].imag() == doctest::Approx(q16.imag_levels[1]));
}

TEST_CASE("midpoint samples resolve to the lower level") {
    const auto q16 = build_constellation(16);
    const double mid_re = 0.5 * (q16.real_levels[1] + q16.real_levels[2]);
    const int idx = detect(q16, {mid_re, q16.imag_levels[0]});
    CHECK(q16.points[idx].real() == doctest::Approx(q16.real_levels[1]));
}

TEST_CASE("slicing equals nearest-point search on a fine grid") {
    for (int order : {4, 8, 16}) {
        const auto spec = build_constellation(order);
        const double lim = 1.5 * std::abs(spec.real_levels.back());
        for (int a = 0; a <= 60; ++a) {
            for (int b = 0; b <= 60; ++b) {
                const std::complex<double> s(-lim + 2 * lim * a / 60.0,
                                             -lim + 2 * lim * b / 60.0);
                CHECK(detect(spec, s) == nearest_point(spec, s));
            }
        }
    }
}

TEST_CASE("non-finite samples are rejected") {
    const auto q4 = build_constellation(4);
    CHECK_THROWS_AS(detect(q4, {std::nan(""), 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(detect(q4, {0.0, std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}
