#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "relulab/rational.hpp"

namespace relulab {

// Input distributions the experiments integrate or sample against.
enum class CubeDistribution {
    UniformCube,     // uniform on [0,1]^d
    CornerCubes,     // uniform on ([0,1/4] u [3/4,1])^d
    UniformBoolean,  // uniform on {0,1}^d
};

enum class LiftVariant {
    FourLipschitz,  // bump max{0, 1 - 4 dist(x, A_z)}: height 1, slope 4
    QuarterHeight,  // bump max{0, 1/4 - dist(x, A_z)}: height 1/4, slope 1
};

// sqrt(r) when r is the square of a rational; nullopt otherwise (or r < 0).
std::optional<Rational> exact_sqrt(const Rational& r);

// Decides a <= b1*sqrt(r1) + b2*sqrt(r2) exactly by at most two squarings.
// Requires b1, b2, r1, r2 >= 0.
bool leq_lin_sqrt(const Rational& a, const Rational& b1, const Rational& r1,
                  const Rational& b2, const Rational& r2);

// Continuous lift f(x) = sum_z g(z) max{0, H - K dist(x, A_z)} of a Boolean
// g, where A_z is the corner cube prod_i [z_i == 0 ? [0,1/4] : [3/4,1]].
// Bumps of distinct corners have disjoint supports, so only z = round(x)
// can contribute; dist(x, A_z)^2 = sum_i max(0, |x_i - z_i| - 1/4)^2 stays
// rational, which keeps every comparison against f exact. This is an
// evaluable function object, not a network; the rounding-layer composition
// is its almost-everywhere network surrogate on the corner cubes.
class LiftedFunction {
public:
    LiftedFunction(int dim, LiftVariant variant,
                   std::function<int(const std::vector<int>&)> g);

    // g read off a truth table indexed by sum_i z_i 2^i.
    static LiftedFunction from_table(LiftVariant variant,
                                     std::vector<int> table);

    int dim() const { return dim_; }
    LiftVariant variant() const { return variant_; }
    Rational height() const;  // plateau value H
    Rational slope() const;   // Lipschitz constant K

    // The rational skeleton of f(x) = g * max(0, H - K sqrt(sq_dist)).
    struct Probe {
        int g;             // g at the rounded corner label
        Rational sq_dist;  // squared distance to that corner cube
        bool zero;         // f(x) is exactly 0
    };
    Probe probe(const std::vector<Rational>& x) const;

    double value(const std::vector<Rational>& x) const;
    // Exact value; throws std::domain_error when sq_dist has no rational
    // square root.
    Rational value_exact(const std::vector<Rational>& x) const;

    // |f(x) - f(y)| <= K ||x - y||, decided exactly.
    bool lipschitz_pair_ok(const std::vector<Rational>& x,
                           const std::vector<Rational>& y) const;

private:
    int dim_;
    LiftVariant variant_;
    std::function<int(const std::vector<int>&)> g_;
};

}  // namespace relulab
