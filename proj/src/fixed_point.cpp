#include "relulab/fixed_point.hpp"

#include <stdexcept>

namespace relulab {

FixedPointGrid::FixedPointGrid(unsigned resolution) : c_(resolution) {
    if (resolution == 0) throw std::invalid_argument("FixedPointGrid: resolution must be >= 1");
    scale_ = pow2(resolution);
}

Rational FixedPointGrid::trunc(const Rational& x) const {
    if (x.sign() < 0 || x > Rational(1))
        throw std::domain_error("FixedPointGrid::trunc: input outside [0,1]");
    BigInt j = (x * Rational(scale_)).floor();
    if (j == scale_) j -= 1;  // trunc(1) maps to the top grid point
    return Rational(j, scale_);
}

bool FixedPointGrid::on_grid(const Rational& x) const {
    if (x.sign() < 0) return false;
    Rational scaled = x * Rational(scale_);
    return scaled.is_integer() && scaled.num() < scale_;
}

std::vector<int> FixedPointGrid::bin(const Rational& grid_point) const {
    Rational scaled = grid_point * Rational(scale_);
    if (grid_point.sign() < 0 || !scaled.is_integer() || scaled.num() >= scale_)
        throw std::domain_error("FixedPointGrid::bin: not a grid point");
    BigInt j = scaled.num();
    std::vector<int> bits(c_);
    for (unsigned i = 0; i < c_; ++i) bits[i] = mpz_tstbit(j.get_mpz_t(), i) ? 1 : 0;
    return bits;
}

Rational FixedPointGrid::real(const std::vector<int>& bits) const {
    if (bits.size() != c_)
        throw std::invalid_argument("FixedPointGrid::real: expected exactly c bits");
    BigInt j = 0;
    for (unsigned i = 0; i < c_; ++i) {
        if (bits[i] != 0 && bits[i] != 1)
            throw std::invalid_argument("FixedPointGrid::real: bits must be 0/1");
        if (bits[i]) mpz_setbit(j.get_mpz_t(), i);
    }
    return Rational(j, scale_);
}

}  // namespace relulab
