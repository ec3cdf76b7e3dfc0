// Acceptance gate: ten end-to-end checks over the whole library, one
// pass/fail line each. Every tolerance, sample count, and time limit is
// pinned here; the process exit code is the number of failed criteria.
#include "relulab/comm.hpp"
#include "relulab/fixed_point.hpp"
#include "relulab/gadgets.hpp"
#include "relulab/lab.hpp"
#include "relulab/lifted.hpp"
#include "relulab/network.hpp"
#include "relulab/threshold_circuit.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace relulab;

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

std::vector<int> bits_of(unsigned long m, int d) {
    std::vector<int> v(d);
    for (int i = 0; i < d; ++i) v[i] = (m >> i) & 1;
    return v;
}

int disj_oracle(const std::vector<int>& x) {
    const int d = static_cast<int>(x.size()) / 2;
    for (int i = 0; i < d; ++i)
        if (x[i] && x[d + i]) return 0;
    return 1;
}

int ip_oracle(const std::vector<int>& x) {
    const int d = static_cast<int>(x.size()) / 2;
    int s = 0;
    for (int i = 0; i < d; ++i) s ^= x[i] & x[d + i];
    return s;
}

int parity_oracle(const std::vector<int>& x) {
    int s = 0;
    for (int b : x) s ^= b;
    return s;
}

Partition partition_from_mask(unsigned long mask, int dim) {
    std::vector<int> alice;
    for (int i = 0; i < dim; ++i)
        if ((mask >> i) & 1) alice.push_back(i);
    return Partition(dim, std::move(alice));
}

Partition random_partition(std::mt19937_64& eng, int dim) {
    for (;;) {
        const unsigned long mask =
            eng() & ((dim >= 64 ? ~0UL : (1UL << dim) - 1));
        if (mask != 0 && mask != (dim >= 64 ? ~0UL : (1UL << dim) - 1))
            return partition_from_mask(mask, dim);
    }
}

std::vector<int> random_bits(std::mt19937_64& eng, int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = (eng() >> 17) & 1;
    return v;
}

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---- criterion 1: lowering threshold circuits to networks ---------------

ThresholdCircuit random_circuit(std::mt19937_64& eng, int max_d, int max_s) {
    const int d = 1 + static_cast<int>(eng() % max_d);
    const int m = 1 + static_cast<int>(eng() % 3);
    int budget = 1 + static_cast<int>(eng() % max_s);
    std::vector<std::vector<Ltf>> layers(m);
    int fan_in = d;
    for (int l = 0; l < m; ++l) {
        const int remaining_layers = m - l;
        const int avail = budget - (remaining_layers - 1);
        const int width = 1 + static_cast<int>(eng() % std::max(1, avail));
        budget -= width;
        for (int g = 0; g < width; ++g) {
            Ltf gate;
            for (int k = 0; k < fan_in; ++k)
                gate.weights.emplace_back(static_cast<long>(eng() % 9) - 4);
            gate.bias = BigInt(static_cast<long>(eng() % 13) - 6);
            layers[l].push_back(std::move(gate));
        }
        fan_in = width;
    }
    return ThresholdCircuit(d, std::move(layers));
}

bool criterion_lowering(std::string& note) {
    std::mt19937_64 eng(20260801);
    long circuits = 0, cases = 0, range_probes = 0;
    for (int t = 0; t < 200; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 10, 20);
        const Network net = compile_to_relu(tc);
        const int s = tc.size();
        const int q = static_cast<int>(tc.layers().back().size());
        if (net.size() != 2 * s + q) {
            note = "size != 2s+q";
            return false;
        }
        if (net.depth() != tc.depth() + 1) {
            note = "depth != m+1";
            return false;
        }

        const int d = tc.input_dim();
        const DoubleView view(net);
        for (unsigned long m = 0; m < (1UL << d); ++m) {
            const std::vector<int> x = bits_of(m, d);
            const std::vector<int> want = tc.evaluate(x);
            const std::vector<double> got =
                view.evaluate(std::vector<double>(x.begin(), x.end()));
            for (std::size_t j = 0; j < want.size(); ++j)
                if (got[j] != static_cast<double>(want[j])) {
                    note = "lowered network disagrees with circuit";
                    return false;
                }
            ++cases;
        }
        // belt and braces: exact-rational replay of the first few circuits
        if (t < 3) {
            for (unsigned long m = 0; m < (1UL << d); ++m) {
                const std::vector<int> x = bits_of(m, d);
                const std::vector<int> want = tc.evaluate(x);
                const std::vector<Rational> got = net.evaluate_bits(x);
                for (std::size_t j = 0; j < want.size(); ++j)
                    if (got[j] != Rational(want[j])) {
                        note = "exact replay disagrees";
                        return false;
                    }
            }
        }

        // real inputs across [-2,2]^d must land in the clipped range [0,1]
        for (int probe = 0; probe < 50; ++probe) {
            std::vector<double> x(d);
            for (int k = 0; k < d; ++k)
                x[k] = -2.0 + static_cast<double>(eng() % (1UL << 20)) *
                                  (4.0 / static_cast<double>(1UL << 20));
            for (double v : view.evaluate(x))
                if (v < 0.0 || v > 1.0) {
                    note = "output escaped [0,1] on a real input";
                    return false;
                }
            ++range_probes;
        }
        ++circuits;
    }
    std::ostringstream os;
    os << circuits << " circuits, " << cases << " exhaustive cases, "
       << range_probes << " range probes";
    note = os.str();
    return true;
}

// ---- criterion 2: disjointness and inner-product gadgets ----------------

bool criterion_gadgets(std::string& note) {
    long cases = 0;
    for (int d = 1; d <= 8; ++d) {
        const Network disj = boolean_gadget(BoolGadget::Disj, d);
        const Network ip = boolean_gadget(BoolGadget::Ip, d);
        if (disj.size() != d + 1 || ip.size() != 2 * d + 1) {
            note = "gadget size off the closed form";
            return false;
        }
        const auto od = network_bit_oracle(disj);
        const auto oi = network_bit_oracle(ip);
        for (unsigned long m = 0; m < (1UL << (2 * d)); ++m) {
            const std::vector<int> x = bits_of(m, 2 * d);
            if (od(x) != disj_oracle(x) || oi(x) != ip_oracle(x)) {
                note = "gadget disagrees with its function";
                return false;
            }
            ++cases;
        }
    }

    const int d = 64;
    const Network disj = boolean_gadget(BoolGadget::Disj, d);
    const Network ip = boolean_gadget(BoolGadget::Ip, d);
    if (disj.size() != d + 1 || ip.size() != 2 * d + 1) {
        note = "gadget size off the closed form at d=64";
        return false;
    }
    const DoubleView vd(disj), vi(ip);
    std::mt19937_64 eng(20260802);
    for (int t = 0; t < 10000; ++t) {
        const std::vector<int> x = random_bits(eng, 2 * d);
        const std::vector<double> xd(x.begin(), x.end());
        if (vd.evaluate(xd)[0] != static_cast<double>(disj_oracle(x)) ||
            vi.evaluate(xd)[0] != static_cast<double>(ip_oracle(x))) {
            note = "wide gadget disagrees on a random input";
            return false;
        }
        if (t < 20) {  // exact spot replay of the double-precision verdicts
            if (disj.evaluate_bits(x)[0] != Rational(disj_oracle(x)) ||
                ip.evaluate_bits(x)[0] != Rational(ip_oracle(x))) {
                note = "exact replay disagrees at d=64";
                return false;
            }
        }
        ++cases;
    }
    std::ostringstream os;
    os << cases << " cases, sizes d+1 / 2d+1 up to d=64";
    note = os.str();
    return true;
}

// ---- criterion 3: referee-model cost law ---------------------------------

bool run_real_case(const Network& net, const Partition& p,
                   const std::vector<int>& x, int want) {
    const ProtocolResult r = eval_network_real(net, p, x);
    return r.bit == want && r.transcript.cost() == net.size();
}

int bit_of(const Network& net, const std::vector<int>& x) {
    return net.evaluate_bits(x)[0] > Rational(1, 2) ? 1 : 0;
}

bool criterion_real_protocol(std::string& note) {
    std::mt19937_64 eng(20260803);
    long runs = 0;

    // every input x every partition while the input arity stays <= 10
    std::vector<Network> nets;
    for (int d = 2; d <= 6; ++d) {
        nets.push_back(boolean_gadget(BoolGadget::And, d));
        nets.push_back(boolean_gadget(BoolGadget::Nor, d));
        nets.push_back(boolean_gadget(BoolGadget::Parity, d));
    }
    for (int d = 1; d <= 5; ++d) {
        nets.push_back(boolean_gadget(BoolGadget::Disj, d));
        nets.push_back(boolean_gadget(BoolGadget::Ip, d));
    }
    for (const Network& net : nets) {
        const int n = net.input_dim();
        std::vector<Partition> parts;
        for (unsigned long pm = 1; pm + 1 < (1UL << n); ++pm)
            parts.push_back(partition_from_mask(pm, n));
        for (unsigned long m = 0; m < (1UL << n); ++m) {
            const std::vector<int> x = bits_of(m, n);
            const int want = bit_of(net, x);
            for (const Partition& p : parts) {
                if (!run_real_case(net, p, x, want)) {
                    note = "referee run wrong at arity <= 10";
                    return false;
                }
                ++runs;
            }
        }
    }

    // arity 12: every input against a partition slice, and every partition
    // against an input slice (the full product is out of time budget)
    for (const BoolGadget kind : {BoolGadget::Disj, BoolGadget::Ip}) {
        const Network net = boolean_gadget(kind, 6);
        std::vector<Partition> slice = {Partition::halves(12),
                                        Partition::alternating(12)};
        for (int i = 0; i < 20; ++i) slice.push_back(random_partition(eng, 12));
        for (unsigned long m = 0; m < (1UL << 12); ++m) {
            const std::vector<int> x = bits_of(m, 12);
            const int want = bit_of(net, x);
            for (const Partition& p : slice) {
                if (!run_real_case(net, p, x, want)) {
                    note = "referee run wrong on the input slice";
                    return false;
                }
                ++runs;
            }
        }
        std::vector<std::vector<int>> inputs;
        std::vector<int> wants;
        for (int i = 0; i < 24; ++i) {
            inputs.push_back(random_bits(eng, 12));
            wants.push_back(bit_of(net, inputs.back()));
        }
        for (unsigned long pm = 1; pm + 1 < (1UL << 12); ++pm) {
            const Partition p = partition_from_mask(pm, 12);
            for (std::size_t i = 0; i < inputs.size(); ++i) {
                if (!run_real_case(net, p, inputs[i], wants[i])) {
                    note = "referee run wrong on the partition slice";
                    return false;
                }
                ++runs;
            }
        }
    }

    // a bare threshold gate costs exactly one referee round
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + static_cast<int>(eng() % 5);
        Ltf g;
        for (int k = 0; k < n; ++k)
            g.weights.emplace_back(static_cast<long>(eng() % 9) - 4);
        g.bias = BigInt(static_cast<long>(eng() % 9) - 4);
        const ThresholdCircuit tc(n, {{g}});
        for (unsigned long pm = 1; pm + 1 < (1UL << n); ++pm) {
            const Partition p = partition_from_mask(pm, n);
            for (unsigned long m = 0; m < (1UL << n); ++m) {
                const std::vector<int> x = bits_of(m, n);
                const ProtocolResult r = eval_network_real(tc, p, x);
                if (r.transcript.cost() != 1 || r.bit != g.eval(x)) {
                    note = "single threshold gate not a one-round problem";
                    return false;
                }
                ++runs;
            }
        }
    }
    std::ostringstream os;
    os << runs << " referee runs, cost = neuron count throughout";
    note = os.str();
    return true;
}

// ---- criterion 4: randomized protocol error and cost growth -------------

bool criterion_randomized(std::string& note) {
    std::mt19937_64 eng(20260804);
    const Rational eps(1, 1000);
    std::ostringstream os;

    for (const BoolGadget kind : {BoolGadget::Disj, BoolGadget::Ip}) {
        const Network net = boolean_gadget(kind, 16);
        const auto oracle = kind == BoolGadget::Disj ? disj_oracle : ip_oracle;
        long wrong = 0;
        const long runs = 10000;
        for (long t = 0; t < runs; ++t) {
            const std::vector<int> x = random_bits(eng, 32);
            const Partition p = random_partition(eng, 32);
            SharedRandomness rnd(eng());
            const ProtocolResult r = eval_network_randomized(net, p, x, eps, rnd);
            if (r.bit != oracle(x)) ++wrong;
        }
        const double rate = static_cast<double>(wrong) / runs;
        os << (kind == BoolGadget::Disj ? "disj16 err " : ", ip16 err ") << rate;
        if (rate > 0.05) {
            note = os.str() + " exceeds 5%";
            return false;
        }
    }

    for (const auto family :
         {CostSweepConfig::Family::Disj, CostSweepConfig::Family::Ip}) {
        CostSweepConfig cfg;
        cfg.model = CostSweepConfig::Model::Randomized;
        cfg.family = family;
        cfg.dims = {8, 16, 32, 64};
        cfg.partitions_per_dim = 20;
        cfg.inputs_per_partition = 5;
        cfg.eps_per_neuron = eps;
        const ExperimentReport rep = cost_sweep(cfg, 20260804);
        if (!rep.pass) {
            note = "a sweep run broke the per-run cost ceiling";
            return false;
        }
        const double gamma = rep.summary["log_factor_exponent"].get<double>();
        os << (family == CostSweepConfig::Family::Disj ? ", disj gamma "
                                                       : ", ip gamma ")
           << std::setprecision(3) << gamma;
        if (gamma < 0.7 || gamma > 1.3) {
            note = os.str() + " outside [0.7, 1.3]";
            return false;
        }
    }
    note = os.str();
    return true;
}

// ---- criterion 5: inner-product self-correction --------------------------

bool criterion_self_correction(std::string& note) {
    const int d = 8;
    const Network net = boolean_gadget(BoolGadget::Ip, d);
    const Rational eps(1, 1000000);  // small enough that every send is raw
    std::mt19937_64 eng(20260805);

    for (int t = 0; t < 1000; ++t) {
        const std::vector<int> x = random_bits(eng, d), y = random_bits(eng, d);
        const Partition p = random_partition(eng, 2 * d);
        SharedRandomness rnd(eng());
        std::vector<int> xy;
        xy.insert(xy.end(), x.begin(), x.end());
        xy.insert(xy.end(), y.begin(), y.end());
        if (ip_self_correct(net, p, x, y, eps, rnd) != ip_oracle(xy)) {
            note = "clean self-correction erred";
            return false;
        }
    }

    // corrupt a pseudorandom 1% of the function's inputs; four reads give
    // at most a 4 rho chance of touching the corrupted set
    const double rho = 0.01;
    const std::uint64_t cut =
        static_cast<std::uint64_t>(rho * 18446744073709551615.0);
    const auto corrupt = [cut](const std::vector<int>& v) {
        std::uint64_t w = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            w |= static_cast<std::uint64_t>(v[i]) << i;
        return splitmix(w ^ 0x5bd1e995ULL) < cut;
    };
    long wrong = 0;
    const long runs = 10000;
    const Partition p = Partition::halves(2 * d);
    for (long t = 0; t < runs; ++t) {
        const std::vector<int> x = random_bits(eng, d), y = random_bits(eng, d);
        SharedRandomness rnd(eng());
        std::vector<int> xy;
        xy.insert(xy.end(), x.begin(), x.end());
        xy.insert(xy.end(), y.begin(), y.end());
        if (ip_self_correct(net, p, x, y, eps, rnd, corrupt) != ip_oracle(xy))
            ++wrong;
    }
    const double rate = static_cast<double>(wrong) / runs;
    const double budget = 6.0 * net.size() * eps.to_double();
    const double se = std::sqrt(rate * (1.0 - rate) / runs);
    const double cap = 4.0 * rho + budget + 2.0 * se;
    std::ostringstream os;
    os << "clean 0/1000, corrupted rate " << rate << " vs cap "
       << std::setprecision(3) << cap;
    note = os.str();
    return rate <= cap;
}

// ---- criterion 6: bit extraction and sawtooth structure ------------------

bool criterion_extraction(std::string& note) {
    // empirical failure mass of the shallow extractor at c = 8
    ExtractorConfig cfg;
    cfg.c = 8;
    cfg.d = 1;
    const ExperimentReport rep = extractor_failure_rate(
        cfg, CubeDistribution::UniformCube, 100000, 0.01, 20260806);
    const double rate = rep.summary["rate"].get<double>();
    if (rate > 0.01) {
        note = "failure rate above 0.01";
        return false;
    }

    // shallow and deep extractors agree wherever both of their exception
    // strips are avoided
    const unsigned c = 6;
    const Rational delta = default_delta(c);
    const Network shallow = bit_extractor_shallow(c, delta, 1);
    const Network deep = bit_extractor_deep(c, delta);
    const FixedPointGrid grid(c);
    std::mt19937_64 eng(20260806);
    const BigInt den = pow2(30);
    long agreed = 0;
    while (agreed < 1000) {
        const Rational x(BigInt(eng() & ((1UL << 30) - 1)), den);
        const Rational t = x * pow2(c);
        const Rational frac = t - Rational(t.floor());
        if (frac < R(1, 4) || frac > R(3, 4)) continue;  // strip-avoiding
        const std::vector<Rational> vs = shallow.evaluate({x});
        const std::vector<Rational> vd = deep.evaluate({x});
        const std::vector<int> want = grid.bin(grid.trunc(x));
        for (unsigned j = 0; j < c; ++j)
            if (vs[j] != Rational(want[j]) || vd[j] != Rational(want[j])) {
                note = "extractors disagree off the strips";
                return false;
            }
        ++agreed;
    }

    // sawtooth duality: the 2^-j digit of x is one exactly when the j-fold
    // sawtooth, probed half a cell to the left, sits at or above 1/2
    std::vector<Network> saws;
    for (int j = 1; j <= 12; ++j) saws.push_back(sawtooth(j));
    for (int t = 0; t < 10000; ++t) {
        const int j = 1 + static_cast<int>(eng() % 12);
        const Rational x(BigInt(eng() & ((1UL << 30) - 1)), den);
        const BigInt scaled = (x * pow2(j)).floor();
        const int digit = mpz_tstbit(scaled.get_mpz_t(), 0) ? 1 : 0;
        const Rational probe = x - Rational(BigInt(1), pow2(j + 1));
        const int pred = saws[j - 1].evaluate({probe})[0] >= R(1, 2) ? 1 : 0;
        if (pred != digit) {
            note = "sawtooth digit characterization failed";
            return false;
        }
    }

    // peak census: the j-fold sawtooth has exactly 2^(j-1) unit maxima
    for (int j = 1; j <= 12; ++j) {
        const Network& saw = saws[j - 1];
        long peaks = 0;
        const unsigned long fine = 1UL << (j + 2);
        for (unsigned long i = 0; i <= fine; ++i) {
            const Rational v = saw.evaluate({Rational(BigInt(i), BigInt(fine))})[0];
            if (v > R(1)) {
                note = "sawtooth exceeded 1";
                return false;
            }
            if (v == R(1)) ++peaks;
        }
        if (peaks != (1L << (j - 1))) {
            note = "wrong peak count";
            return false;
        }
    }
    std::ostringstream os;
    os << "failure rate " << rate << ", 1000 strip-free agreements, "
       << "duality and peaks through j=12";
    note = os.str();
    return true;
}

// ---- criterion 7: Lipschitz lifting ---------------------------------------

bool criterion_lifting(std::string& note) {
    std::mt19937_64 eng(20260807);
    const BigInt den = pow2(30);
    auto dyadic = [&] { return Rational(BigInt(eng() & ((1UL << 30) - 1)), den); };

    for (int t = 0; t < 100000; ++t) {
        const int d = 1 + static_cast<int>(eng() % 3);
        const unsigned long table = eng();
        const LiftedFunction f(d, LiftVariant::FourLipschitz,
                               [table](const std::vector<int>& z) {
                                   unsigned long idx = 0;
                                   for (std::size_t i = 0; i < z.size(); ++i)
                                       idx |= static_cast<unsigned long>(z[i]) << i;
                                   return static_cast<int>((table >> idx) & 1);
                               });
        std::vector<Rational> x(d), y(d);
        for (int k = 0; k < d; ++k) x[k] = dyadic(), y[k] = dyadic();
        if (!f.lipschitz_pair_ok(x, y)) {
            note = "a pair violated the Lipschitz bound";
            return false;
        }
    }

    for (int d = 1; d <= 8; ++d) {
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<int> table(1UL << d);
            for (auto& e : table) e = (eng() >> 13) & 1;
            const LiftedFunction f = LiftedFunction::from_table(
                LiftVariant::FourLipschitz, table);
            for (unsigned long m = 0; m < (1UL << d); ++m) {
                const std::vector<int> z = bits_of(m, d);
                const std::vector<Rational> x(z.begin(), z.end());
                if (f.value_exact(x) != Rational(table[m])) {
                    note = "lift broke agreement at a Boolean point";
                    return false;
                }
            }
        }
    }

    const Network g_net = boolean_gadget(BoolGadget::Parity, 4);
    const Network agree = agreement_network(g_net);
    const LiftedFunction lift(4, LiftVariant::FourLipschitz, parity_oracle);
    CubeSampler sampler(CubeDistribution::CornerCubes, 4, 20260807);
    for (int t = 0; t < 10000; ++t) {
        const std::vector<Rational> x = sampler.next();
        if (agree.evaluate(x)[0] != lift.value_exact(x)) {
            note = "surrogate network left the lift on a corner cube";
            return false;
        }
    }
    note = "100000 pairs, Boolean agreement to d=8, 10000 corner samples";
    return true;
}

// ---- criterion 8: corner-bump packing distances ---------------------------

bool criterion_packing(std::string& note) {
    long checks = 0;
    for (unsigned long a = 0; a < 4; ++a)
        for (unsigned long b = 0; b < 4; ++b) {
            if (!packing_distance_check(1, bits_of(a, 2), bits_of(b, 2)).pass) {
                note = "closed form missed at d=1";
                return false;
            }
            ++checks;
        }
    for (unsigned long a = 0; a < 16; ++a)
        for (unsigned long b = 0; b < 16; ++b) {
            if (!packing_distance_check(2, bits_of(a, 4), bits_of(b, 4)).pass) {
                note = "closed form missed at d=2";
                return false;
            }
            ++checks;
        }
    std::mt19937_64 eng(20260808);
    for (int t = 0; t < 50; ++t) {
        const std::vector<int> a = random_bits(eng, 8), b = random_bits(eng, 8);
        if (!packing_distance_check(3, a, b).pass) {
            note = "closed form missed at d=3";
            return false;
        }
        ++checks;
    }
    std::ostringstream os;
    os << checks << " table pairs, rational equality each time";
    note = os.str();
    return true;
}

// ---- criterion 9: end-to-end approximation pipeline -----------------------

bool criterion_pipeline(std::string& note) {
    PipelineConfig one;
    one.d = 1;
    one.c = 4;
    one.f = [](const std::vector<Rational>& x) { return x[0]; };
    one.f_net = Network(1, {Layer{{{R(1)}}, {R(0)}, std::nullopt}});
    const ExperimentReport r1 = pipeline_check(one, 20260809);
    if (!r1.pass) {
        note = "exact univariate run exceeded its error budget";
        return false;
    }

    PipelineConfig two;
    two.d = 2;
    two.c = 5;
    two.f = [](const std::vector<Rational>& x) {
        return (x[0] + x[1]) / Rational(2);
    };
    two.mc_samples = 100000;
    const ExperimentReport r2 = pipeline_check(two, 20260809);
    if (!r2.pass) {
        note = "sampled bivariate run exceeded its error budget";
        return false;
    }
    std::ostringstream os;
    os << "exact err " << std::setprecision(3)
       << r1.summary["error"].get<double>() << " <= "
       << r1.summary["bound"].get<double>() << "; sampled err "
       << r2.summary["error"].get<double>() << " <= "
       << r2.summary["bound"].get<double>();
    note = os.str();
    return true;
}

// ---- criterion 10: output thresholding ------------------------------------

bool criterion_thresholding(std::string& note) {
    long cases = 0;
    for (int d = 1; d <= 8; ++d) {
        const Network ip = boolean_gadget(BoolGadget::Ip, d);
        const Network thr = threshold_output(ip);
        for (unsigned long m = 0; m < (1UL << (2 * d)); ++m) {
            const std::vector<int> x = bits_of(m, 2 * d);
            if (thr.evaluate_bits(x)[0] != ip.evaluate_bits(x)[0]) {
                note = "thresholding changed a cube output";
                return false;
            }
            ++cases;
        }
    }

    // low readings snap to exactly 0, high readings to exactly 1
    const Network id(1, {Layer{{{R(1)}}, {R(0)}, std::nullopt}});
    const Network snap = threshold_output(id);
    std::mt19937_64 eng(20260810);
    const BigInt den = pow2(20);
    for (int t = 0; t < 5000; ++t) {
        const Rational u(BigInt(eng() & ((1UL << 20) - 1)), den);  // [0,1)
        const Rational low = u * R(4, 3) - R(1);                   // [-1, 1/3)
        const Rational high = R(2, 3) + u * R(4, 3);               // [2/3, 2)
        if (snap.evaluate({low})[0] != R(0) || snap.evaluate({high})[0] != R(1)) {
            note = "snapping missed an exact endpoint";
            return false;
        }
        cases += 2;
    }
    if (snap.evaluate({R(1, 3)})[0] != R(0) || snap.evaluate({R(2, 3)})[0] != R(1)) {
        note = "boundary values missnapped";
        return false;
    }
    std::ostringstream os;
    os << cases + 2 << " cases, cube outputs untouched";
    note = os.str();
    return true;
}

struct Criterion {
    const char* label;
    double limit_sec;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"circuit lowering: exhaustive equivalence, 2s+q size, m+1 depth", 120,
         criterion_lowering},
        {"disjointness / inner-product gadgets exact, linear size", 60,
         criterion_gadgets},
        {"referee protocol: zero error, cost = neuron count", 120,
         criterion_real_protocol},
        {"randomized protocol: error <= 5%, log-factor exponent in [0.7,1.3]",
         600, criterion_randomized},
        {"self-correction: clean runs exact, corrupted rate <= 4rho + slack",
         300, criterion_self_correction},
        {"bit extraction, extractor agreement, sawtooth digits and peaks", 300,
         criterion_extraction},
        {"Lipschitz lifting: pair bound, Boolean agreement, corner surrogate",
         180, criterion_lifting},
        {"packing distance = Hamming/(16*2^d), exact", 120, criterion_packing},
        {"pipeline error within the three-term budget", 300, criterion_pipeline},
        {"output thresholding: cube-invariant, snaps [0,1/3] and [2/3,inf)", 60,
         criterion_thresholding},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (secs > criteria[i].limit_sec) {
            ok = false;
            detail += " [over time limit]";
        }
        if (!ok) ++failures;
        std::cout << "C" << std::setw(2) << std::setfill('0') << (i + 1)
                  << std::setfill(' ') << (ok ? " PASS  " : " FAIL  ")
                  << criteria[i].label << "  [" << std::fixed
                  << std::setprecision(1) << secs << "s]" << std::endl;
        if (!detail.empty())
            std::cout << "       " << detail << std::endl;
        std::cout.unsetf(std::ios::fixed);
        std::cout << std::setprecision(6);
    }
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : "FAILED CRITERIA: " + std::to_string(failures))
              << std::endl;
    return failures;
}
