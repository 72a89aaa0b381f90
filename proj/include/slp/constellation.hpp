// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_CONSTELLATION_HPP
#define SLP_CONSTELLATION_HPP

#include <complex>
#include <utility>
#include <vector>

namespace slp {

enum class Axis { Real, Imag };
enum class CoordClass { Interior, Extreme };

// Classification of one coordinate of a constellation point. Extreme
// coordinates sit on the outermost level of their axis, so their detection
// region is unbounded on that side and the precoder may overshoot them;
// interior coordinates must be hit exactly.
struct CoordinateClass {
    Axis axis;
    CoordClass cls;
    int sign;  // sign of the coordinate, +1 or -1
};

// Unit-average-power rectangular M-QAM constellation. Points form the
// product grid real_levels x imag_levels, ordered lexicographically by
// (real level, imag level).
struct ConstellationSpec {
    int order = 0;
    int bits_per_symbol = 0;
    double scale = 1.0;  // normalization applied to the raw {+-1,+-3}/sqrt(2) grid
    std::vector<std::complex<double>> points;
    std::vector<double> real_levels;
    std::vector<double> imag_levels;

    std::size_t size() const { return points.size(); }
};

// Supported orders: 4, 8 (4x2 rectangular), 16.
ConstellationSpec build_constellation(int order);

// Per-axis interior/extreme classification of one point.
std::pair<CoordinateClass, CoordinateClass> classify(const ConstellationSpec& spec,
                                                     int point_index);

// Hard decision: index of the nearest constellation point. Equivalent to
// per-axis threshold slicing at level midpoints; exact midpoints resolve
// toward the lower level.
int detect(const ConstellationSpec& spec, std::complex<double> sample);

}  // namespace slp

#endif
