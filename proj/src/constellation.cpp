// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slp {

namespace {

std::vector<double> scaled_levels(const std::vector<int>& raw, double scale) {
    std::vector<double> out;
    out.reserve(raw.size());
    for (int r : raw) {
        out.push_back(scale * static_cast<double>(r) / std::sqrt(2.0));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ConstellationSpec build_constellation(int order) {
    std::vector<int> raw_re, raw_im;
    double scale = 1.0;
    switch (order) {
        case 4:
            raw_re = {-1, 1};
            raw_im = {-1, 1};
            scale = 1.0;
            break;
        case 8:
            raw_re = {-3, -1, 1, 3};
            raw_im = {-1, 1};
            scale = 1.0 / std::sqrt(3.0);
            break;
        case 16:
            raw_re = {-3, -1, 1, 3};
            raw_im = {-3, -1, 1, 3};
            scale = 1.0 / std::sqrt(5.0);
            break;
        default:
            throw std::invalid_argument("unsupported constellation order " +
                                        std::to_string(order) +
                                        "; accepted orders are 4, 8, 16");
    }

    ConstellationSpec spec;
    spec.order = order;
    spec.bits_per_symbol = static_cast<int>(std::lround(std::log2(order)));
    spec.scale = scale;
    spec.real_levels = scaled_levels(raw_re, scale);
    spec.imag_levels = scaled_levels(raw_im, scale);
    spec.points.reserve(spec.real_levels.size() * spec.imag_levels.size());
    for (double re : spec.real_levels) {
        for (double im : spec.imag_levels) {
            spec.points.emplace_back(re, im);
        }
    }
    return spec;
}

std::pair<CoordinateClass, CoordinateClass> classify(const ConstellationSpec& spec,
                                                     int point_index) {
    if (point_index < 0 || static_cast<std::size_t>(point_index) >= spec.points.size()) {
        throw std::out_of_range("constellation point index out of range");
    }
    const auto p = spec.points[point_index];

    auto classify_axis = [](Axis axis, double coord, const std::vector<double>& levels) {
        double max_abs = 0.0;
        for (double l : levels) max_abs = std::max(max_abs, std::abs(l));
        const bool extreme = std::abs(coord) >= max_abs * (1.0 - 1e-12);
        return CoordinateClass{axis, extreme ? CoordClass::Extreme : CoordClass::Interior,
                               coord >= 0.0 ? 1 : -1};
    };

    return {classify_axis(Axis::Real, p.real(), spec.real_levels),
            classify_axis(Axis::Imag, p.imag(), spec.imag_levels)};
}

namespace {

// Midpoint slicing; c exactly on a midpoint stays at the lower level.
int slice_axis(const std::vector<double>& levels, double c) {
    int i = 0;
    const int n = static_cast<int>(levels.size());
    while (i + 1 < n && c > 0.5 * (levels[i] + levels[i + 1])) ++i;
    return i;
}

}  // namespace

int detect(const ConstellationSpec& spec, std::complex<double> sample) {
    if (!std::isfinite(sample.real()) || !std::isfinite(sample.imag())) {
        throw std::invalid_argument("detect: sample is not finite");
    }
    const int ri = slice_axis(spec.real_levels, sample.real());
    const int ii = slice_axis(spec.imag_levels, sample.imag());
    return ri * static_cast<int>(spec.imag_levels.size()) + ii;
}

}  // namespace slp
