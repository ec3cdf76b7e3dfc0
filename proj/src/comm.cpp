#include "relulab/comm.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace relulab {

namespace {

void check_bits(const std::vector<int>& x) {
    for (int b : x)
        if (b != 0 && b != 1) throw std::invalid_argument("inputs must be bits");
}

int ceil_log2(long v) {
    int k = 0;
    while ((1L << k) < v) ++k;
    return k;
}

int bit_length(const BigInt& v) {
    return v == 0 ? 1 : static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

}  // namespace

Partition::Partition(int dim, std::vector<int> alice_indices)
    : alice(std::move(alice_indices)) {
    if (dim < 2) throw std::invalid_argument("Partition: need at least 2 coordinates");
    std::sort(alice.begin(), alice.end());
    if (alice.empty() || std::adjacent_find(alice.begin(), alice.end()) != alice.end())
        throw std::invalid_argument("Partition: alice side must be a nonempty set");
    if (alice.front() < 0 || alice.back() >= dim)
        throw std::invalid_argument("Partition: index out of range");
    std::size_t next = 0;
    for (int i = 0; i < dim; ++i) {
        if (next < alice.size() && alice[next] == i)
            ++next;
        else
            bob.push_back(i);
    }
    if (bob.empty()) throw std::invalid_argument("Partition: bob side must be nonempty");
}

Partition Partition::halves(int dim) {
    std::vector<int> a;
    for (int i = 0; i < dim / 2; ++i) a.push_back(i);
    return Partition(dim, std::move(a));
}

Partition Partition::alternating(int dim) {
    std::vector<int> a;
    for (int i = 0; i < dim; i += 2) a.push_back(i);
    return Partition(dim, std::move(a));
}

bool SharedRandomness::bit() {
    if (avail_ == 0) {
        buf_ = eng_();
        avail_ = 64;
    }
    const bool b = buf_ & 1;
    buf_ >>= 1;
    --avail_;
    return b;
}

BigInt SharedRandomness::mask(int nbits) {
    if (nbits <= 0) throw std::invalid_argument("mask: need nbits > 0");
    BigInt out(0);
    for (int got = 0; got < nbits; got += 64) {
        BigInt w(static_cast<unsigned long>(word()));
        mpz_mul_2exp(w.get_mpz_t(), w.get_mpz_t(), static_cast<mp_bitcnt_t>(got));
        out += w;
    }
    mpz_fdiv_r_2exp(out.get_mpz_t(), out.get_mpz_t(),
                    static_cast<mp_bitcnt_t>(nbits));
    return out;
}

void Transcript::say(int speaker, int bit) {
    TranscriptEvent e;
    e.kind = TranscriptEvent::Kind::Bit;
    e.speaker = speaker;
    e.bit = bit;
    events.push_back(std::move(e));
}

void Transcript::referee(Rational alpha, Rational beta, int bit) {
    TranscriptEvent e;
    e.kind = TranscriptEvent::Kind::Referee;
    e.speaker = -1;
    e.bit = bit;
    e.alpha = std::move(alpha);
    e.beta = std::move(beta);
    events.push_back(std::move(e));
}

nlohmann::ordered_json transcript_to_json(const Transcript& t, int output_bit) {
    nlohmann::ordered_json events = nlohmann::ordered_json::array();
    for (const auto& e : t.events) {
        nlohmann::ordered_json j;
        if (e.kind == TranscriptEvent::Kind::Bit) {
            j["kind"] = "bit";
            j["speaker"] = e.speaker == 0 ? "alice" : "bob";
            j["bit"] = e.bit;
        } else {
            j["kind"] = "referee";
            j["alpha"] = e.alpha.to_string();
            j["beta"] = e.beta.to_string();
            j["bit"] = e.bit;
        }
        events.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["events"] = std::move(events);
    out["cost"] = t.cost();
    out["output"] = output_bit;
    return out;
}

GtOutcome randomized_gt(const BigInt& a, const BigInt& b, int bit_len,
                        const Rational& eps, SharedRandomness& rnd,
                        Transcript* transcript) {
    if (bit_len <= 0) throw std::invalid_argument("randomized_gt: bit_len must be positive");
    if (eps.sign() <= 0 || eps >= Rational(1))
        throw std::invalid_argument("randomized_gt: eps must be in (0,1)");
    const BigInt off = pow2(static_cast<unsigned long>(bit_len));
    if (abs(a) >= off || abs(b) >= off)
        throw std::invalid_argument("randomized_gt: operand exceeds bit_len");

    // Offset to positive so both operands are exactly n-bit strings.
    const int n = bit_len + 1;
    const BigInt A = a + off, B = b + off;

    // r search rounds; per-check fingerprint failure 2^-k with
    // k = ceil(log2((r+1)/eps)) union-bounds the whole run to < eps.
    const int r = std::max(1, ceil_log2(n + 1));
    int k = 1;
    while (Rational(BigInt(r + 1)) > eps * Rational(pow2(static_cast<unsigned long>(k))))
        ++k;

    long cost = 0;
    auto say = [&](int speaker, int bitval) {
        if (transcript) transcript->say(speaker, bitval);
        ++cost;
    };
    auto msb = [&](const BigInt& v, int i) {  // i-th bit, MSB-first, of n bits
        return mpz_tstbit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(n - 1 - i)) ? 1 : 0;
    };
    auto prefix = [&](const BigInt& v, int len) {
        BigInt p;
        mpz_fdiv_q_2exp(p.get_mpz_t(), v.get_mpz_t(),
                        static_cast<mp_bitcnt_t>(n - len));
        return p;
    };
    auto equal_prefix = [&](int len) {
        const BigInt pa = prefix(A, len), pb = prefix(B, len);
        if (len <= k) {
            // Short prefixes go over raw: zero-error, len + 1 bits.
            for (int i = 0; i < len; ++i)
                say(0, mpz_tstbit(pa.get_mpz_t(),
                                  static_cast<mp_bitcnt_t>(len - 1 - i)) ? 1 : 0);
            const bool equal = pa == pb;
            say(1, equal ? 1 : 0);
            return equal;
        }
        // k shared random-subset parities; differing prefixes slip through
        // all of them with probability 2^-k, equal ones never fail.
        bool equal = true;
        for (int t = 0; t < k; ++t) {
            const BigInt m = rnd.mask(len);
            const BigInt xa = pa & m, xb = pb & m;
            const int par_a = static_cast<int>(mpz_popcount(xa.get_mpz_t()) & 1);
            const int par_b = static_cast<int>(mpz_popcount(xb.get_mpz_t()) & 1);
            say(0, par_a);
            if (par_a != par_b) equal = false;
        }
        say(1, equal ? 1 : 0);
        return equal;
    };

    // Longest common prefix by binary search; lo is always a known-equal
    // length (up to fingerprint error).
    int lo = 0, hi = n;
    while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (equal_prefix(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    if (lo == n) return {false, cost};  // identical operands: a > b is false

    const int abit = msb(A, lo);
    say(0, abit);
    const int bbit = msb(B, lo);
    // Agreeing bits here mean a fingerprint lied; equality is the safe call.
    const bool greater = abit != bbit && abit == 1;
    say(1, greater ? 1 : 0);
    return {greater, cost};
}

BitOutcome evaluate_ltf_randomized(const Ltf& ltf, const Partition& p,
                                   const std::vector<int>& x, const Rational& eps,
                                   SharedRandomness& rnd, Transcript* transcript) {
    if (x.size() != ltf.weights.size())
        throw std::invalid_argument("evaluate_ltf_randomized: arity mismatch");
    check_bits(x);
    BigInt alpha = 0, beta = -ltf.bias;
    BigInt bound_a = 0, bound_b = abs(ltf.bias);
    for (int i : p.alice) {
        if (x[i]) alpha += ltf.weights[i];
        bound_a += abs(ltf.weights[i]);
    }
    for (int i : p.bob) {
        if (x[i]) beta -= ltf.weights[i];
        bound_b += abs(ltf.weights[i]);
    }
    const int bl = bit_length(std::max(bound_a, bound_b));
    const GtOutcome g = randomized_gt(alpha, beta, bl, eps, rnd, transcript);
    return {g.greater ? 1 : 0, g.cost};
}

BitOutcome evaluate_ltf_real(const Ltf& ltf, const Partition& p,
                             const std::vector<int>& x, Transcript* transcript) {
    if (x.size() != ltf.weights.size())
        throw std::invalid_argument("evaluate_ltf_real: arity mismatch");
    check_bits(x);
    BigInt alpha = 0, beta = -ltf.bias;
    for (int i : p.alice)
        if (x[i]) alpha += ltf.weights[i];
    for (int i : p.bob)
        if (x[i]) beta -= ltf.weights[i];
    const int bit = alpha > beta ? 1 : 0;
    if (transcript) transcript->referee(Rational(alpha), Rational(beta), bit);
    return {bit, 1};
}

int protocol_bit_len(const Network& net) {
    // Slopes and intercepts join the bound so the comparison against 1/2 on
    // a resolved output piece stays in range too.
    Rational mbp(0), msl(1), mic(1);
    auto grow = [](Rational& m, const Rational& v) {
        Rational a = v.abs();
        if (a > m) m = a;
    };
    for (const Layer& L : net.layers()) {
        if (!L.activation) continue;
        for (const auto& c : L.activation->breakpoints) grow(mbp, c);
        for (const auto& s : L.activation->slopes) grow(msl, s);
        for (const auto& t : L.activation->intercepts) grow(mic, t);
    }
    const Rational b = net.preactivation_bound();
    const Rational bound = ((Rational(1) + msl) * b + mbp + mic + Rational(1)) *
                           Rational(8) * Rational(net.denominator_lcm());
    // Never narrower than the input dimension: the instance width is sized
    // for the weight-precision class the network lives in (one coefficient
    // per input at full precision), not for whatever small weights this
    // particular network happens to carry. Costs then scale with the
    // dimension the way the per-comparison bound advertises.
    return std::max({1, net.input_dim(), bit_length(bound.floor() + 1)});
}

Rational per_neuron_budget(const Network& net, const Rational& eps_total) {
    return eps_total / Rational(2 * net.size());
}

namespace {

// One scaled-integer comparison "f(x) > t" between the two halves of x.
// The scale clears every denominator in sight, so no sign ever moves.
struct SplitCompare {
    const Partition& p;
    const std::vector<int>& x;

    void split(const AffineForm& f, const Rational& t, BigInt& alpha,
               BigInt& beta) const {
        BigInt scale = 1;
        auto fold = [&scale](const Rational& r) {
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), r.den().get_mpz_t());
        };
        for (const auto& c : f.coef) fold(c);
        fold(f.bias);
        fold(t);
        alpha = 0;
        beta = ((t - f.bias) * Rational(scale)).num();
        for (int i : p.alice)
            if (x[i]) alpha += (f.coef[i] * Rational(scale)).num();
        for (int i : p.bob)
            if (x[i]) beta -= (f.coef[i] * Rational(scale)).num();
    }
};

}  // namespace

ProtocolResult eval_network_randomized(const Network& net, const Partition& p,
                                       const std::vector<int>& x,
                                       const Rational& eps_per_neuron,
                                       SharedRandomness& rnd) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("eval_network_randomized: need a scalar Boolean output");
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("eval_network_randomized: input size mismatch");
    check_bits(x);

    const int bl = protocol_bit_len(net);
    ProtocolResult res;
    res.bit = 0;
    SplitCompare sc{p, x};
    auto greater = [&](const AffineForm& f, const Rational& t, const Rational& eps) {
        BigInt alpha, beta;
        sc.split(f, t, alpha, beta);
        return randomized_gt(alpha, beta, bl, eps, rnd, &res.transcript).greater;
    };

    CollapseWalker w(net);
    const int last_layer = net.depth() - 1;
    while (!w.done()) {
        const AffineForm& f = w.pre_affine();
        const auto& act = w.activation();
        const bool output_row = w.layer_index() == last_layer;
        if (!act) {
            // Affine readout: Boolean verdict is "value > 1/2".
            res.bit = greater(f, Rational(1, 2), eps_per_neuron) ? 1 : 0;
            w.resolve(0);
        } else if (act->kind != ActKind::Pwl) {
            const int piece = greater(f, Rational(0), eps_per_neuron) ? 1 : 0;
            if (output_row) res.bit = piece;  // sign / exact-Boolean ReLU output
            w.resolve(piece);
        } else {
            const int pieces = act->piece_count();
            const int steps = std::max(1, ceil_log2(pieces));
            const Rational eps_step = eps_per_neuron / Rational(steps);
            int lo = 0, hi = pieces - 1;
            while (lo < hi) {
                const int mid = (lo + hi) / 2;
                if (greater(f, act->breakpoints[mid], eps_step))
                    lo = mid + 1;
                else
                    hi = mid;
            }
            if (output_row) {
                AffineForm out;
                out.coef = f.coef;
                for (auto& c : out.coef) c = c * act->slopes[lo];
                out.bias = f.bias * act->slopes[lo] + act->intercepts[lo];
                res.bit = greater(out, Rational(1, 2), eps_per_neuron) ? 1 : 0;
            }
            w.resolve(lo);
        }
    }
    return res;
}

namespace {

ProtocolResult eval_network_real_impl(const Network& net, const Partition& p,
                                      const std::vector<Rational>& x) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("eval_network_real: need a scalar output");
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("eval_network_real: input size mismatch");

    ProtocolResult res;
    res.bit = 0;
    auto greater = [&](const AffineForm& f, const Rational& t) {
        Rational alpha(0), beta = t - f.bias;
        for (int i : p.alice) alpha += f.coef[i] * x[i];
        for (int i : p.bob) beta -= f.coef[i] * x[i];
        const int bit = alpha > beta ? 1 : 0;
        res.transcript.referee(std::move(alpha), std::move(beta), bit);
        return bit == 1;
    };

    CollapseWalker w(net);
    const int last_layer = net.depth() - 1;
    while (!w.done()) {
        const AffineForm& f = w.pre_affine();
        const auto& act = w.activation();
        const bool output_row = w.layer_index() == last_layer;
        if (!act) {
            res.bit = greater(f, Rational(1, 2)) ? 1 : 0;
            w.resolve(0);
        } else if (act->kind != ActKind::Pwl) {
            const int piece = greater(f, Rational(0)) ? 1 : 0;
            if (output_row) res.bit = piece;
            w.resolve(piece);
        } else {
            int lo = 0, hi = act->piece_count() - 1;
            while (lo < hi) {
                const int mid = (lo + hi) / 2;
                if (greater(f, act->breakpoints[mid]))
                    lo = mid + 1;
                else
                    hi = mid;
            }
            if (output_row) {
                AffineForm out;
                out.coef = f.coef;
                for (auto& c : out.coef) c = c * act->slopes[lo];
                out.bias = f.bias * act->slopes[lo] + act->intercepts[lo];
                res.bit = greater(out, Rational(1, 2)) ? 1 : 0;
            }
            w.resolve(lo);
        }
    }
    return res;
}

}  // namespace

ProtocolResult eval_network_real(const Network& net, const Partition& p,
                                 const std::vector<Rational>& x) {
    return eval_network_real_impl(net, p, x);
}

ProtocolResult eval_network_real(const Network& net, const Partition& p,
                                 const std::vector<int>& x) {
    check_bits(x);
    std::vector<Rational> xr;
    xr.reserve(x.size());
    for (int b : x) xr.emplace_back(b);
    return eval_network_real_impl(net, p, xr);
}

ProtocolResult eval_network_real(const ThresholdCircuit& tc, const Partition& p,
                                 const std::vector<int>& x) {
    if (tc.output_dim() != 1)
        throw std::invalid_argument("eval_network_real: need a single output gate");
    if (static_cast<int>(x.size()) != tc.input_dim())
        throw std::invalid_argument("eval_network_real: input size mismatch");
    check_bits(x);

    ProtocolResult res;
    res.bit = 0;
    std::vector<int> cur = x;
    bool first = true;
    for (const auto& layer : tc.layers()) {
        std::vector<int> nxt;
        nxt.reserve(layer.size());
        for (const Ltf& g : layer) {
            BigInt alpha = 0, beta = -g.bias;
            if (first) {
                // Private inputs: split the inner product along the partition.
                for (int i : p.alice)
                    if (cur[i]) alpha += g.weights[i];
                for (int i : p.bob)
                    if (cur[i]) beta -= g.weights[i];
            } else {
                // Wires already resolved are public; Alice carries the sum.
                for (std::size_t i = 0; i < cur.size(); ++i)
                    if (cur[i]) alpha += g.weights[i];
            }
            const int bit = alpha > beta ? 1 : 0;
            res.transcript.referee(Rational(alpha), Rational(beta), bit);
            nxt.push_back(bit);
        }
        cur = std::move(nxt);
        first = false;
    }
    res.bit = cur[0];
    return res;
}

int ip_self_correct(const Network& net_prime, const Partition& p,
                    const std::vector<int>& x, const std::vector<int>& y,
                    const Rational& eps_per_neuron, SharedRandomness& rnd,
                    const std::function<bool(const std::vector<int>&)>& corrupt,
                    Transcript* transcript) {
    const std::size_t d = x.size();
    if (y.size() != d || d == 0)
        throw std::invalid_argument("ip_self_correct: x and y must have equal length");
    if (net_prime.input_dim() != static_cast<int>(2 * d))
        throw std::invalid_argument("ip_self_correct: network arity is not 2d");
    check_bits(x);
    check_bits(y);

    // Shared random shifts, drawn x' first then y'.
    std::vector<int> xs(d), ys(d);
    for (auto& b : xs) b = rnd.bit() ? 1 : 0;
    for (auto& b : ys) b = rnd.bit() ? 1 : 0;

    auto point = [&](bool shift_x, bool shift_y) {
        std::vector<int> v;
        v.reserve(2 * d);
        for (std::size_t i = 0; i < d; ++i) v.push_back(shift_x ? x[i] ^ xs[i] : xs[i]);
        for (std::size_t i = 0; i < d; ++i) v.push_back(shift_y ? y[i] ^ ys[i] : ys[i]);
        return v;
    };
    auto lie = [&](const std::vector<int>& v, int bit) {
        return corrupt && corrupt(v) ? 1 - bit : bit;
    };

    int acc = 0;
    for (const auto& [sx, sy] : {std::pair{true, true}, {true, false}, {false, true}}) {
        const std::vector<int> v = point(sx, sy);
        ProtocolResult r = eval_network_randomized(net_prime, p, v, eps_per_neuron, rnd);
        if (transcript)
            transcript->events.insert(transcript->events.end(),
                                      r.transcript.events.begin(),
                                      r.transcript.events.end());
        acc ^= lie(v, r.bit);
    }
    // Fourth read is input-independent: both players evaluate it locally.
    const std::vector<int> v4 = point(false, false);
    const int b4 = net_prime.evaluate_bits(v4)[0] > Rational(1, 2) ? 1 : 0;
    acc ^= lie(v4, b4);
    return acc;
}

}  // namespace relulab
