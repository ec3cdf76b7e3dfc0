#include "relulab/lifted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace relulab {

std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r.sign() < 0) return std::nullopt;
    // r is canonical, so r is a rational square iff num and den both are.
    const BigInt num = r.num(), den = r.den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) ||
        !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    BigInt sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    return Rational(sn, sd);
}

bool leq_lin_sqrt(const Rational& a, const Rational& b1, const Rational& r1,
                  const Rational& b2, const Rational& r2) {
    if (b1.sign() < 0 || b2.sign() < 0 || r1.sign() < 0 || r2.sign() < 0)
        throw std::invalid_argument("leq_lin_sqrt: needs nonnegative b, r");
    if (a.sign() <= 0) return true;
    // a, rhs > 0: square once. a^2 <= b1^2 r1 + b2^2 r2 + 2 b1 b2 sqrt(r1 r2).
    const Rational c = a * a - b1 * b1 * r1 - b2 * b2 * r2;
    if (c.sign() <= 0) return true;
    return c * c <= Rational(4) * b1 * b1 * b2 * b2 * r1 * r2;
}

LiftedFunction::LiftedFunction(int dim, LiftVariant variant,
                               std::function<int(const std::vector<int>&)> g)
    : dim_(dim), variant_(variant), g_(std::move(g)) {
    if (dim_ < 1) throw std::invalid_argument("LiftedFunction: need dim >= 1");
    if (!g_) throw std::invalid_argument("LiftedFunction: missing g");
}

LiftedFunction LiftedFunction::from_table(LiftVariant variant,
                                          std::vector<int> table) {
    int d = 0;
    while ((std::size_t{1} << d) < table.size()) ++d;
    if (table.size() < 2 || (std::size_t{1} << d) != table.size())
        throw std::invalid_argument("LiftedFunction: table size must be 2^d");
    auto g = [table = std::move(table)](const std::vector<int>& z) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (z[i]) idx |= std::size_t{1} << i;
        return table[idx];
    };
    return LiftedFunction(d, variant, std::move(g));
}

Rational LiftedFunction::height() const {
    return variant_ == LiftVariant::FourLipschitz ? Rational(1) : Rational(1, 4);
}

Rational LiftedFunction::slope() const {
    return variant_ == LiftVariant::FourLipschitz ? Rational(4) : Rational(1);
}

LiftedFunction::Probe LiftedFunction::probe(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("LiftedFunction: dimension mismatch");
    const Rational half(1, 2);
    std::vector<int> z(x.size());
    Rational sq(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = x[i] > half ? 1 : 0;
        const Rational lo = z[i] ? Rational(3, 4) : Rational(0);
        const Rational hi = z[i] ? Rational(1) : Rational(1, 4);
        const Rational off = std::max(lo - x[i], x[i] - hi);
        if (off.sign() > 0) sq += off * off;
    }
    Probe p;
    p.g = g_(z);
    if (p.g != 0 && p.g != 1)
        throw std::domain_error("LiftedFunction: g must be 0/1-valued");
    // The bump vanishes once dist >= H/K = 1/4 (both variants).
    p.sq_dist = sq;
    p.zero = p.g == 0 || sq >= Rational(1, 16);
    return p;
}

double LiftedFunction::value(const std::vector<Rational>& x) const {
    const Probe p = probe(x);
    if (p.zero) return 0.0;
    const double v = height().to_double() -
                     slope().to_double() * std::sqrt(p.sq_dist.to_double());
    return v > 0 ? v : 0.0;
}

Rational LiftedFunction::value_exact(const std::vector<Rational>& x) const {
    const Probe p = probe(x);
    if (p.zero) return Rational(0);
    auto root = exact_sqrt(p.sq_dist);
    if (!root) throw std::domain_error("LiftedFunction: irrational value");
    return height() - slope() * *root;
}

bool LiftedFunction::lipschitz_pair_ok(const std::vector<Rational>& x,
                                       const std::vector<Rational>& y) const {
    if (x.size() != y.size())
        throw std::invalid_argument("LiftedFunction: dimension mismatch");
    Rational t(0);
    for (std::size_t i = 0; i < x.size(); ++i) t += (x[i] - y[i]) * (x[i] - y[i]);
    const Probe px = probe(x), py = probe(y);
    const Rational h = height(), k = slope();

    if (px.zero && py.zero) return true;
    if (px.zero || py.zero) {
        // |H - K sqrt(s)| <= K sqrt(t)  <=>  H <= K sqrt(s) + K sqrt(t).
        const Rational& s = px.zero ? py.sq_dist : px.sq_dist;
        return leq_lin_sqrt(h, k, s, k, t);
    }
    // Heights cancel: K |sqrt(sx) - sqrt(sy)| <= K sqrt(t), i.e. with
    // sb >= ss,  sb - ss - t <= 2 sqrt(ss t).
    const Rational& sb = px.sq_dist >= py.sq_dist ? px.sq_dist : py.sq_dist;
    const Rational& ss = px.sq_dist >= py.sq_dist ? py.sq_dist : px.sq_dist;
    return leq_lin_sqrt(sb - ss - t, Rational(2), ss * t, Rational(0), Rational(0));
}

}  // namespace relulab
