#include "relulab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace relulab {

namespace {

std::string bits_to_string(const std::vector<int>& v) {
    std::string s;
    s.reserve(v.size());
    for (int b : v) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<int> mask_to_bits(unsigned long mask, int d) {
    std::vector<int> v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1;
    return v;
}

}  // namespace

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = name;
    j["params"] = params;
    j["records"] = records;
    j["summary"] = summary;
    j["pass"] = pass;
    return j;
}

// ---- fast views ---------------------------------------------------------

DoubleView::DoubleView(const Network& net) : input_dim_(net.input_dim()) {
    for (const Layer& L : net.layers()) {
        DLayer dl;
        dl.activated = L.activation.has_value();
        if (dl.activated) {
            for (const auto& c : L.activation->breakpoints)
                dl.breakpoints.push_back(c.to_double());
            for (const auto& s : L.activation->slopes)
                dl.slopes.push_back(s.to_double());
            for (const auto& t : L.activation->intercepts)
                dl.intercepts.push_back(t.to_double());
        }
        for (int j = 0; j < L.rows(); ++j) {
            Row r;
            r.b = L.bias[j].to_double();
            r.w.reserve(L.weights[j].size());
            for (const auto& w : L.weights[j]) r.w.push_back(w.to_double());
            dl.rows.push_back(std::move(r));
        }
        layers_.push_back(std::move(dl));
    }
}

std::vector<double> DoubleView::evaluate(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw std::invalid_argument("DoubleView: input size mismatch");
    std::vector<double> cur = x, nxt;
    for (const DLayer& L : layers_) {
        nxt.assign(L.rows.size(), 0.0);
        for (std::size_t j = 0; j < L.rows.size(); ++j) {
            const Row& r = L.rows[j];
            double acc = r.b;
            for (std::size_t k = 0; k < r.w.size(); ++k) acc += r.w[k] * cur[k];
            if (L.activated) {
                std::size_t p = 0;
                while (p < L.breakpoints.size() && L.breakpoints[p] < acc) ++p;
                acc = L.slopes[p] * acc + L.intercepts[p];
            }
            nxt[j] = acc;
        }
        cur.swap(nxt);
    }
    return cur;
}

namespace {

// Integer mirror used for Boolean exhaustive sweeps. Only built when every
// parameter is an integer and the propagated magnitude bound leaves int64
// headroom, so arithmetic cannot overflow.
struct Int64View {
    struct L {
        std::vector<std::vector<long long>> w;
        std::vector<long long> b;
        bool act = false;
        std::vector<long long> bps, sl, ic;
    };
    std::vector<L> layers;
    int in_dim = 0;

    static bool integral_fit(const Rational& r, long long& out) {
        if (!r.is_integer()) return false;
        const BigInt n = r.num();
        if (!mpz_fits_slong_p(n.get_mpz_t())) return false;
        out = mpz_get_si(n.get_mpz_t());
        return std::llabs(out) < (1LL << 60);
    }

    static std::optional<Int64View> build(const Network& net) {
        if (net.denominator_lcm() != 1) return std::nullopt;
        Rational msl(1), mic(0);
        for (const Layer& l : net.layers()) {
            if (!l.activation) continue;
            for (const auto& s : l.activation->slopes) {
                Rational a = s.abs();
                if (a > msl) msl = a;
            }
            for (const auto& t : l.activation->intercepts) {
                Rational a = t.abs();
                if (a > mic) mic = a;
            }
        }
        const Rational b = net.preactivation_bound();
        if (b * msl + mic >= Rational(pow2(60))) return std::nullopt;

        Int64View v;
        v.in_dim = net.input_dim();
        for (const Layer& l : net.layers()) {
            L dl;
            dl.act = l.activation.has_value();
            long long t;
            if (dl.act) {
                for (const auto& c : l.activation->breakpoints) {
                    if (!integral_fit(c, t)) return std::nullopt;
                    dl.bps.push_back(t);
                }
                for (const auto& s : l.activation->slopes) {
                    if (!integral_fit(s, t)) return std::nullopt;
                    dl.sl.push_back(t);
                }
                for (const auto& c : l.activation->intercepts) {
                    if (!integral_fit(c, t)) return std::nullopt;
                    dl.ic.push_back(t);
                }
            }
            for (int j = 0; j < l.rows(); ++j) {
                std::vector<long long> row;
                row.reserve(l.weights[j].size());
                for (const auto& w : l.weights[j]) {
                    if (!integral_fit(w, t)) return std::nullopt;
                    row.push_back(t);
                }
                if (!integral_fit(l.bias[j], t)) return std::nullopt;
                dl.w.push_back(std::move(row));
                dl.b.push_back(t);
            }
            v.layers.push_back(std::move(dl));
        }
        return v;
    }

    long long out(const std::vector<int>& bits) const {
        std::vector<long long> cur(bits.begin(), bits.end()), nxt;
        for (const L& l : layers) {
            nxt.assign(l.w.size(), 0);
            for (std::size_t j = 0; j < l.w.size(); ++j) {
                long long acc = l.b[j];
                for (std::size_t k = 0; k < l.w[j].size(); ++k)
                    acc += l.w[j][k] * cur[k];
                if (l.act) {
                    std::size_t p = 0;
                    while (p < l.bps.size() && l.bps[p] < acc) ++p;
                    acc = l.sl[p] * acc + l.ic[p];
                }
                nxt[j] = acc;
            }
            cur.swap(nxt);
        }
        return cur[0];
    }
};

}  // namespace

std::function<int(const std::vector<int>&)> network_bit_oracle(const Network& net) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("network_bit_oracle: need a scalar output");
    if (auto view = Int64View::build(net))
        return [v = std::move(*view)](const std::vector<int>& x) {
            return 2 * v.out(x) > 1 ? 1 : 0;
        };
    return [net](const std::vector<int>& x) {
        return net.evaluate_bits(x)[0] > Rational(1, 2) ? 1 : 0;
    };
}

std::function<int(const std::vector<int>&)> circuit_bit_oracle(const ThresholdCircuit& tc) {
    if (tc.output_dim() != 1)
        throw std::invalid_argument("circuit_bit_oracle: need a single output gate");
    return [tc](const std::vector<int>& x) { return tc.evaluate(x)[0]; };
}

// ---- sampling -----------------------------------------------------------

CubeSampler::CubeSampler(CubeDistribution mu, int dim, std::uint64_t seed)
    : mu_(mu), dim_(dim), eng_(seed) {
    if (dim < 1) throw std::invalid_argument("CubeSampler: need dim >= 1");
}

std::vector<Rational> CubeSampler::next() {
    std::vector<Rational> x;
    x.reserve(dim_);
    const BigInt den = pow2(30);
    for (int i = 0; i < dim_; ++i) {
        switch (mu_) {
            case CubeDistribution::UniformBoolean:
                x.emplace_back(static_cast<long>(eng_() & 1));
                break;
            case CubeDistribution::UniformCube: {
                const unsigned long j = eng_() & ((1UL << 30) - 1);
                x.push_back(Rational(BigInt(j), den));
                break;
            }
            case CubeDistribution::CornerCubes: {
                // bit picks the corner interval, 28 bits place the point in
                // its quarter-width slab.
                const std::uint64_t w = eng_();
                const unsigned long u = w & ((1UL << 28) - 1);
                Rational v(BigInt(u), den);
                if (w >> 63) v += Rational(3, 4);
                x.push_back(std::move(v));
                break;
            }
        }
    }
    return x;
}

// ---- exact L2 -----------------------------------------------------------

Rational l2_squared_boolean(const std::function<Rational(const std::vector<int>&)>& f,
                            const std::function<Rational(const std::vector<int>&)>& g,
                            int d) {
    if (d < 1 || d > 20)
        throw std::invalid_argument("l2_squared_boolean: need 1 <= d <= 20");
    Rational acc(0);
    const unsigned long total = 1UL << d;
    for (unsigned long m = 0; m < total; ++m) {
        const std::vector<int> x = mask_to_bits(m, d);
        const Rational diff = f(x) - g(x);
        acc += diff * diff;
    }
    return acc / Rational(BigInt(total));
}

std::vector<UnivariatePiece> univariate_pieces(const Network& net,
                                               const Rational& lo,
                                               const Rational& hi) {
    if (net.input_dim() != 1)
        throw std::invalid_argument("univariate_pieces: need a single input");
    if (net.output_dim() != 1)
        throw std::invalid_argument("univariate_pieces: need a single output");
    if (!(lo < hi)) throw std::invalid_argument("univariate_pieces: empty interval");

    struct Seg {
        Rational lo, hi;
        std::vector<AffineForm> forms;  // layer outputs as affine in x
    };
    std::vector<Seg> segs{{lo, hi, {AffineForm{{Rational(1)}, Rational(0)}}}};

    for (const Layer& L : net.layers()) {
        std::vector<Seg> out;
        for (const Seg& s : segs) {
            // Pre-activations on this segment are affine in x.
            std::vector<AffineForm> pre(L.rows());
            for (int j = 0; j < L.rows(); ++j) {
                Rational c(0), b = L.bias[j];
                for (std::size_t k = 0; k < s.forms.size(); ++k) {
                    c += L.weights[j][k] * s.forms[k].coef[0];
                    b += L.weights[j][k] * s.forms[k].bias;
                }
                pre[j] = AffineForm{{c}, b};
            }
            if (!L.activation) {
                out.push_back({s.lo, s.hi, std::move(pre)});
                continue;
            }
            // Split where any row crosses any breakpoint, then resolve each
            // subsegment by its midpoint.
            std::vector<Rational> cuts;
            for (const auto& g : pre) {
                if (g.coef[0].is_zero()) continue;
                for (const auto& t : L.activation->breakpoints) {
                    Rational x = (t - g.bias) / g.coef[0];
                    if (s.lo < x && x < s.hi) cuts.push_back(std::move(x));
                }
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            cuts.push_back(s.hi);
            Rational a = s.lo;
            for (const Rational& b : cuts) {
                const Rational mid = (a + b) / Rational(2);
                std::vector<AffineForm> forms(L.rows());
                for (int j = 0; j < L.rows(); ++j) {
                    const int p = L.activation->piece_of(pre[j].eval({mid}));
                    forms[j] = AffineForm{
                        {pre[j].coef[0] * L.activation->slopes[p]},
                        pre[j].bias * L.activation->slopes[p] +
                            L.activation->intercepts[p]};
                }
                out.push_back({a, b, std::move(forms)});
                a = b;
            }
        }
        segs = std::move(out);
    }

    std::vector<UnivariatePiece> pieces;
    pieces.reserve(segs.size());
    for (auto& s : segs)
        pieces.push_back({std::move(s.lo), std::move(s.hi), std::move(s.forms[0])});
    return pieces;
}

Rational l2_squared_univariate(const Network& a, const Network& b) {
    const auto pa = univariate_pieces(a, Rational(0), Rational(1));
    const auto pb = univariate_pieces(b, Rational(0), Rational(1));
    // Merge the two partitions of [0,1] and integrate the squared affine
    // difference exactly on each cell.
    Rational acc(0);
    std::size_t i = 0, j = 0;
    Rational x(0);
    while (i < pa.size() && j < pb.size()) {
        const Rational ub = std::min(pa[i].hi, pb[j].hi);
        if (x < ub) {
            const Rational p = pa[i].form.coef[0] - pb[j].form.coef[0];
            const Rational q = pa[i].form.bias - pb[j].form.bias;
            const Rational lo2 = x * x, hi2 = ub * ub;
            acc += p * p * (hi2 * ub - lo2 * x) / Rational(3) +
                   p * q * (hi2 - lo2) + q * q * (ub - x);
            x = ub;
        }
        if (pa[i].hi == ub) ++i;
        if (j < pb.size() && pb[j].hi == ub) ++j;
    }
    return acc;
}

Rational l2_squared_corner_lifts(const LiftedFunction& a, const LiftedFunction& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("l2_squared_corner_lifts: dimension mismatch");
    if (a.variant() != b.variant())
        throw std::invalid_argument("l2_squared_corner_lifts: mixed variants");
    const int d = a.dim();
    if (d > 3) throw std::invalid_argument("l2_squared_corner_lifts: need d <= 3");

    Rational acc(0);
    const Rational w = Rational(1) / Rational(BigInt(pow2(d)));  // cube mass
    for (unsigned long z = 0; z < (1UL << d); ++z) {
        // Probe every vertex of the corner cube plus its center: the bumps
        // plateau there, so all probes must agree before we treat the
        // integrand as the constant it is.
        std::vector<std::vector<Rational>> probes;
        for (unsigned long v = 0; v < (1UL << d); ++v) {
            std::vector<Rational> x(d);
            for (int i = 0; i < d; ++i) {
                const bool one = (z >> i) & 1;
                const bool far = (v >> i) & 1;
                x[i] = one ? (far ? Rational(3, 4) : Rational(1))
                           : (far ? Rational(1, 4) : Rational(0));
            }
            probes.push_back(std::move(x));
        }
        {
            std::vector<Rational> mid(d);
            for (int i = 0; i < d; ++i)
                mid[i] = (z >> i) & 1 ? Rational(7, 8) : Rational(1, 8);
            probes.push_back(std::move(mid));
        }
        const Rational diff0 = a.value_exact(probes[0]) - b.value_exact(probes[0]);
        for (std::size_t t = 1; t < probes.size(); ++t) {
            if (a.value_exact(probes[t]) - b.value_exact(probes[t]) != diff0)
                throw std::logic_error(
                    "l2_squared_corner_lifts: integrand not constant on a cube");
        }
        acc += diff0 * diff0 * w;
    }
    return acc;
}

McEstimate l2_squared_monte_carlo(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<double(const std::vector<double>&)>& g, int dim,
    CubeDistribution mu, long n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("l2_squared_monte_carlo: need n >= 2");
    CubeSampler sampler(mu, dim, seed);
    double s1 = 0, s2 = 0;
    std::vector<double> xd(dim);
    for (long i = 0; i < n; ++i) {
        const std::vector<Rational> x = sampler.next();
        for (int k = 0; k < dim; ++k) xd[k] = x[k].to_double();
        const double diff = f(xd) - g(xd);
        const double v = diff * diff;
        s1 += v;
        s2 += v * v;
    }
    McEstimate e;
    e.samples = n;
    e.mean = s1 / static_cast<double>(n);
    const double var =
        std::max(0.0, (s2 / static_cast<double>(n) - e.mean * e.mean)) *
        static_cast<double>(n) / static_cast<double>(n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(n));
    return e;
}

// ---- experiments --------------------------------------------------------

ExperimentReport exhaustive_equivalence(
    const std::string& label, const std::function<int(const std::vector<int>&)>& a,
    const std::function<int(const std::vector<int>&)>& b, int d) {
    if (d < 1 || d > 20)
        throw std::invalid_argument("exhaustive_equivalence: need 1 <= d <= 20");
    ExperimentReport rep;
    rep.name = "exhaustive_equivalence";
    rep.params = {{"label", label}, {"bits", d}};
    long disagreements = 0;
    const unsigned long total = 1UL << d;
    for (unsigned long m = 0; m < total; ++m) {
        const std::vector<int> x = mask_to_bits(m, d);
        const int va = a(x), vb = b(x);
        if (va != vb) {
            ++disagreements;
            if (rep.records.size() < 32)
                rep.records.push_back(
                    {{"input", bits_to_string(x)}, {"a", va}, {"b", vb}});
        }
    }
    rep.summary = {{"cases", total}, {"disagreements", disagreements}};
    rep.pass = disagreements == 0;
    return rep;
}

ExperimentReport packing_distance_check(int d, const std::vector<int>& psi,
                                        const std::vector<int>& psi_prime) {
    if (d < 1 || d > 3)
        throw std::invalid_argument("packing_distance_check: need 1 <= d <= 3");
    if (psi.size() != (1UL << d) || psi_prime.size() != psi.size())
        throw std::invalid_argument("packing_distance_check: tables must have 2^d entries");
    long hamming = 0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        if (psi[i] != psi_prime[i]) ++hamming;

    const LiftedFunction fa =
        LiftedFunction::from_table(LiftVariant::QuarterHeight, psi);
    const LiftedFunction fb =
        LiftedFunction::from_table(LiftVariant::QuarterHeight, psi_prime);
    const Rational measured = l2_squared_corner_lifts(fa, fb);
    const Rational expected(BigInt(hamming), BigInt(16) * pow2(d));

    ExperimentReport rep;
    rep.name = "packing_distance_check";
    rep.params = {{"d", d},
                  {"psi", bits_to_string(psi)},
                  {"psi_prime", bits_to_string(psi_prime)}};
    rep.summary = {{"hamming", hamming},
                   {"measured_sq", measured.to_string()},
                   {"expected_sq", expected.to_string()}};
    rep.pass = measured == expected;
    return rep;
}

ExperimentReport extractor_failure_rate(const ExtractorConfig& cfg,
                                        CubeDistribution mu, long n,
                                        double threshold, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("extractor_failure_rate: need n >= 1");
    const Rational delta = cfg.delta.is_zero() ? default_delta(cfg.c) : cfg.delta;
    const Network net =
        cfg.deep ? juxtapose(std::vector<Network>(
                       static_cast<std::size_t>(cfg.d),
                       bit_extractor_deep(cfg.c, delta)))
                 : bit_extractor_shallow(cfg.c, delta, cfg.d);
    const DoubleView view(net);
    const FixedPointGrid grid(cfg.c);
    CubeSampler sampler(mu, cfg.d, seed);

    long failures = 0, rechecks = 0;
    ExperimentReport rep;
    std::vector<double> xd(cfg.d);
    for (long i = 0; i < n; ++i) {
        const std::vector<Rational> x = sampler.next();
        std::vector<int> want;
        want.reserve(static_cast<std::size_t>(cfg.d) * cfg.c);
        for (const Rational& xi : x) {
            const std::vector<int> bits = grid.bin(grid.trunc(xi));
            want.insert(want.end(), bits.begin(), bits.end());
        }
        for (int k = 0; k < cfg.d; ++k) xd[k] = x[k].to_double();
        const std::vector<double> got = view.evaluate(xd);
        bool fail = false, borderline = false;
        for (std::size_t j = 0; j < got.size(); ++j) {
            const double diff = std::fabs(got[j] - want[j]);
            if (diff == 0.0) continue;
            if (diff > 1e-6)
                fail = true;
            else
                borderline = true;  // too close to call in doubles
        }
        if (!fail && borderline) {
            // Exact re-read of the handful of samples the doubles can't
            // classify (possible only when the dyadic-exactness headroom of
            // the view is exhausted).
            ++rechecks;
            const std::vector<Rational> exact = net.evaluate(x);
            for (std::size_t j = 0; j < exact.size(); ++j)
                if (exact[j] != Rational(want[j])) fail = true;
        }
        if (fail) {
            ++failures;
            if (rep.records.size() < 20) {
                nlohmann::ordered_json r;
                nlohmann::ordered_json coords = nlohmann::ordered_json::array();
                for (const auto& xi : x) coords.push_back(xi.to_string());
                r["x"] = std::move(coords);
                rep.records.push_back(std::move(r));
            }
        }
    }

    const double rate = static_cast<double>(failures) / static_cast<double>(n);
    const double margin =
        3.0 * std::sqrt(threshold * (1.0 - threshold) / static_cast<double>(n));
    rep.name = "extractor_failure_rate";
    rep.params = {{"c", cfg.c},
                  {"delta", delta.to_string()},
                  {"d", cfg.d},
                  {"deep", cfg.deep},
                  {"samples", n},
                  {"seed", seed}};
    rep.summary = {{"failures", failures}, {"rate", rate},      {"threshold", threshold},
                   {"margin", margin},     {"rechecks", rechecks}};
    rep.pass = rate <= threshold + margin;
    return rep;
}

namespace {

std::vector<int> random_bits(std::mt19937_64& eng, int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = (eng() >> 32) & 1;
    return v;
}

Partition random_partition(std::mt19937_64& eng, int dim) {
    for (;;) {
        std::vector<int> alice;
        for (int i = 0; i < dim; ++i)
            if ((eng() >> 32) & 1) alice.push_back(i);
        if (!alice.empty() && static_cast<int>(alice.size()) < dim)
            return Partition(dim, std::move(alice));
    }
}

}  // namespace

ExperimentReport cost_sweep(const CostSweepConfig& cfg, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "cost_sweep";
    const bool real = cfg.model == CostSweepConfig::Model::Real;
    rep.params = {{"model", real ? "real" : "randomized"},
                  {"family",
                   cfg.family == CostSweepConfig::Family::Disj ? "disj" : "ip"},
                  {"partitions_per_dim", cfg.partitions_per_dim},
                  {"inputs_per_partition", cfg.inputs_per_partition},
                  {"eps_per_neuron", cfg.eps_per_neuron.to_string()},
                  {"seed", seed}};

    std::mt19937_64 eng(seed);
    bool ok = true;
    std::vector<double> xs, ys;  // ln ln d vs ln(max_cost / size)

    for (int d : cfg.dims) {
        const Network net = boolean_gadget(
            cfg.family == CostSweepConfig::Family::Disj ? BoolGadget::Disj
                                                        : BoolGadget::Ip,
            d);
        const auto oracle = network_bit_oracle(net);
        const int dim = net.input_dim();
        const int comparisons =
            net.activated_count() + (net.layers().back().activation ? 0 : 1);

        std::vector<Partition> parts;
        if (dim <= 8) {
            for (unsigned long m = 1; m + 1 < (1UL << dim); ++m) {
                std::vector<int> alice;
                for (int i = 0; i < dim; ++i)
                    if ((m >> i) & 1) alice.push_back(i);
                parts.emplace_back(dim, std::move(alice));
            }
        } else {
            for (int i = 0; i < cfg.partitions_per_dim; ++i)
                parts.push_back(random_partition(eng, dim));
        }

        long max_cost = 0, mismatches = 0, runs = 0;
        for (const Partition& p : parts) {
            for (int t = 0; t < cfg.inputs_per_partition; ++t) {
                const std::vector<int> x = random_bits(eng, dim);
                long cost;
                int bit;
                if (real) {
                    ProtocolResult r = eval_network_real(net, p, x);
                    cost = r.transcript.cost();
                    bit = r.bit;
                    if (cost != comparisons) ok = false;
                } else {
                    SharedRandomness rnd(eng());
                    ProtocolResult r = eval_network_randomized(
                        net, p, x, cfg.eps_per_neuron, rnd);
                    cost = r.transcript.cost();
                    bit = r.bit;
                }
                if (bit != oracle(x)) ++mismatches;
                max_cost = std::max(max_cost, cost);
                ++runs;
            }
        }

        // Per-run ceiling from the documented per-comparison bound.
        const int bl = protocol_bit_len(net);
        const double lbl = std::max(1.0, std::log2(static_cast<double>(bl)));
        const double leps = std::log2(static_cast<double>(bl) /
                                      cfg.eps_per_neuron.to_double());
        const double bound =
            real ? comparisons : comparisons * 8.0 * lbl * leps;
        if (static_cast<double>(max_cost) > bound) ok = false;
        if (real && mismatches > 0) ok = false;

        rep.records.push_back({{"d", d},
                               {"size", net.size()},
                               {"runs", runs},
                               {"max_cost", max_cost},
                               {"bound", bound},
                               {"mismatches", mismatches}});
        if (!real && d >= 3) {
            xs.push_back(std::log(std::log(static_cast<double>(d))));
            ys.push_back(std::log(static_cast<double>(max_cost) /
                                  static_cast<double>(net.size())));
        }
    }

    rep.summary["all_within_bound"] = ok;
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
        mx /= xs.size(), my /= ys.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        rep.summary["log_factor_exponent"] = num / den;
    }
    rep.pass = ok;
    return rep;
}

std::string cost_table_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "d,size,runs,max_cost,bound,mismatches\n";
    for (const auto& r : report.records)
        out << r["d"].get<long>() << ',' << r["size"].get<long>() << ','
            << r["runs"].get<long>() << ',' << r["max_cost"].get<long>() << ','
            << r["bound"].get<double>() << ',' << r["mismatches"].get<long>()
            << '\n';
    return out.str();
}

ExperimentReport pipeline_check(const PipelineConfig& cfg, std::uint64_t seed) {
    if (cfg.d < 1 || static_cast<long>(cfg.d) * cfg.c > 16)
        throw std::invalid_argument("pipeline_check: need d*c <= 16");
    if (!cfg.f) throw std::invalid_argument("pipeline_check: missing oracle");
    const Rational delta = cfg.delta.is_zero() ? default_delta(cfg.c) : cfg.delta;
    const FixedPointGrid grid(cfg.c);

    // Truth tables of the grid-truncated f, one per output bit: entry index
    // packs the c*d input bits LSB-first in the order the extractor emits
    // them (coordinate-major).
    const int in_bits = static_cast<int>(cfg.c) * cfg.d;
    const unsigned long entries = 1UL << in_bits;
    std::vector<std::vector<int>> tables(cfg.c, std::vector<int>(entries, 0));
    for (unsigned long m = 0; m < entries; ++m) {
        std::vector<Rational> x;
        x.reserve(cfg.d);
        for (int i = 0; i < cfg.d; ++i) {
            std::vector<int> bits(cfg.c);
            for (unsigned j = 0; j < cfg.c; ++j)
                bits[j] = (m >> (i * cfg.c + j)) & 1;
            x.push_back(grid.real(bits));
        }
        Rational v = cfg.f(x);
        if (v.sign() < 0 || v > Rational(1))
            throw std::domain_error("pipeline_check: oracle must map into [0,1]");
        const std::vector<int> out = grid.bin(grid.trunc(v));
        for (unsigned j = 0; j < cfg.c; ++j) tables[j][m] = out[j];
    }

    const ThresholdCircuit tc = truth_tables_to_circuit(tables);
    const Network net = benign_approximator(tc, cfg.c, cfg.d, delta);

    // Three-term prediction: input truncation, value quantization, and the
    // extractor's strip mass (union over coordinates, error amplitude <= 1).
    const Rational two_c(BigInt(1), pow2(cfg.c));
    const Rational strip_mass = Rational(cfg.d) * delta;
    const double sqrt_d = std::sqrt(static_cast<double>(cfg.d));
    const double bound = cfg.lipschitz_bound.to_double() * sqrt_d *
                             two_c.to_double() +
                         two_c.to_double() +
                         std::sqrt(strip_mass.to_double());

    ExperimentReport rep;
    rep.name = "pipeline_check";
    rep.params = {{"d", cfg.d},
                  {"c", cfg.c},
                  {"delta", delta.to_string()},
                  {"lipschitz", cfg.lipschitz_bound.to_string()},
                  {"seed", seed}};
    rep.summary = {{"network_size", net.size()},
                   {"network_depth", net.depth()},
                   {"truncation_term",
                    cfg.lipschitz_bound.to_double() * sqrt_d * two_c.to_double()},
                   {"quantization_term", two_c.to_double()},
                   {"failure_term", std::sqrt(strip_mass.to_double())},
                   {"bound", bound}};

    if (cfg.d == 1 && cfg.f_net) {
        // Exact error: integrate (net - f)^2 and compare the norm against
        // the bound by squaring out the radical.
        const Rational err_sq = l2_squared_univariate(net, *cfg.f_net);
        const Rational a =
            (cfg.lipschitz_bound + Rational(1)) * two_c;  // rational part
        rep.summary["method"] = "exact_univariate";
        rep.summary["error_sq"] = err_sq.to_string();
        rep.summary["error"] = std::sqrt(err_sq.to_double());
        rep.pass = leq_lin_sqrt(err_sq - a * a - strip_mass, Rational(2) * a,
                                strip_mass, Rational(0), Rational(0));
    } else {
        // Sample rationals so the oracle stays exact; only the network runs
        // in doubles.
        const DoubleView view(net);
        CubeSampler sampler(cfg.mu, cfg.d, seed);
        double s1 = 0, s2 = 0;
        std::vector<double> xd(cfg.d);
        for (long i = 0; i < cfg.mc_samples; ++i) {
            const std::vector<Rational> x = sampler.next();
            for (int k = 0; k < cfg.d; ++k) xd[k] = x[k].to_double();
            const double diff = view.evaluate(xd)[0] - cfg.f(x).to_double();
            const double v = diff * diff;
            s1 += v;
            s2 += v * v;
        }
        const double n = static_cast<double>(cfg.mc_samples);
        const double mean = s1 / n;
        const double var =
            std::max(0.0, s2 / n - mean * mean) * n / (n - 1.0);
        const double se = std::sqrt(var / n);
        rep.summary["method"] = "monte_carlo";
        rep.summary["samples"] = cfg.mc_samples;
        rep.summary["error_sq"] = mean;
        rep.summary["error"] = std::sqrt(std::max(0.0, mean));
        rep.summary["std_error"] = se;
        rep.pass = mean <= bound * bound + 3.0 * se;
    }
    return rep;
}

}  // namespace relulab
