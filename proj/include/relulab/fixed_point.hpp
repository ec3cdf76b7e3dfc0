#pragma once

#include "relulab/rational.hpp"

#include <vector>

namespace relulab {

// The dyadic grid I = { j/2^c : 0 <= j <= 2^c - 1 } together with the
// truncation map [0,1] -> I and the c-bit codec. Bit vectors are LSB-first:
// bit j (1-indexed) carries weight 2^{j-1}/2^c, so real() computes
// sum_j b_j 2^{j-1} / 2^c.
class FixedPointGrid {
public:
    explicit FixedPointGrid(unsigned resolution);

    unsigned resolution() const { return c_; }

    // floor(x * 2^c) / 2^c, clamped at the top so trunc(1) = (2^c - 1)/2^c.
    // Domain error outside [0,1].
    Rational trunc(const Rational& x) const;

    // Grid point -> LSB-first bits. Domain error off the grid.
    std::vector<int> bin(const Rational& grid_point) const;

    // LSB-first bits -> grid point. Expects exactly c bits, each 0/1.
    Rational real(const std::vector<int>& bits) const;

    bool on_grid(const Rational& x) const;

private:
    unsigned c_;
    BigInt scale_;  // 2^c
};

}  // namespace relulab
