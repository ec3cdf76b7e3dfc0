#include "relulab/gadgets.hpp"

#include <map>
#include <stdexcept>
#include <utility>

namespace relulab {

namespace {

// One all-ones row of width d with the given bias.
void push_ones_row(Layer& L, int d, Rational bias) {
    L.weights.emplace_back(d, Rational(1));
    L.bias.push_back(std::move(bias));
}

Layer relu_layer() {
    Layer L;
    L.activation = Activation::relu();
    return L;
}

Layer affine_layer() { return Layer{}; }

}  // namespace

Network sawtooth(int j) {
    if (j < 1) throw std::invalid_argument("sawtooth: need j >= 1");
    std::vector<Layer> layers;
    // First pair reads the input directly; later pairs read the previous
    // pair (u, v) through phi's argument u - v.
    {
        Layer L = relu_layer();
        L.weights = {{Rational(2)}, {Rational(4)}};
        L.bias = {Rational(0), Rational(-2)};
        layers.push_back(std::move(L));
    }
    for (int t = 1; t < j; ++t) {
        Layer L = relu_layer();
        L.weights = {{Rational(2), Rational(-2)}, {Rational(4), Rational(-4)}};
        L.bias = {Rational(0), Rational(-2)};
        layers.push_back(std::move(L));
    }
    Layer out = affine_layer();
    out.weights = {{Rational(1), Rational(-1)}};
    out.bias = {Rational(0)};
    layers.push_back(std::move(out));
    return Network(1, std::move(layers));
}

Rational default_delta(unsigned c) { return Rational(BigInt(1), pow2(c + 3)); }

Network bit_extractor_shallow(unsigned c, const Rational& delta, int d) {
    if (c < 1 || c > 20)
        throw std::invalid_argument("bit_extractor_shallow: resolution out of range");
    if (d < 1) throw std::invalid_argument("bit_extractor_shallow: need d >= 1");
    if (delta.sign() <= 0 || delta >= Rational(1))
        throw std::invalid_argument("bit_extractor_shallow: delta must be in (0,1)");

    const long n = static_cast<long>(1) << c;  // 2^c boundaries per coordinate
    const Rational scale = Rational(BigInt(n)) / delta;

    // Single-coordinate block.  Boundary l contributes the ramp pair
    //   g_l = [(2^c x - l + delta)/delta]_+ - [(2^c x - l)/delta]_+,
    // a 0->1 step across [l - delta, l] in the scaled coordinate t = 2^c x.
    // Bit j of trunc(x) is sum over l with bit j set of (g_l - g_{l+1}).
    Layer ramps = relu_layer();
    for (long l = 1; l <= n; ++l) {
        ramps.weights.push_back({scale});
        ramps.bias.push_back((delta - Rational(BigInt(l))) / delta);
        ramps.weights.push_back({scale});
        ramps.bias.push_back(Rational(BigInt(-l)) / delta);
    }

    Layer readout = affine_layer();
    for (unsigned j = 0; j < c; ++j) {
        // Accumulate signed multiplicities: adjacent members of the index
        // set make the inner g_{l+1} terms cancel.
        std::map<long, long> coef;  // ramp-pair index l -> multiplicity of g_l
        for (long l = 1; l < n; ++l) {
            if ((l >> j) & 1) {
                coef[l] += 1;
                coef[l + 1] -= 1;
            }
        }
        std::vector<Rational> row(2 * static_cast<std::size_t>(n), Rational(0));
        for (auto [l, m] : coef) {
            if (m == 0) continue;
            row[2 * (l - 1)] = Rational(m);       // A_l
            row[2 * (l - 1) + 1] = Rational(-m);  // B_l
        }
        readout.weights.push_back(std::move(row));
        readout.bias.push_back(Rational(0));
    }

    Network block(1, {std::move(ramps), std::move(readout)});
    return juxtapose(std::vector<Network>(static_cast<std::size_t>(d), block));
}

Network bit_extractor_deep(unsigned c, const Rational& delta) {
    if (c < 1) throw std::invalid_argument("bit_extractor_deep: need c >= 1");
    if (delta.sign() <= 0 || delta >= Rational(1))
        throw std::invalid_argument("bit_extractor_deep: delta must be in (0,1)");

    // Branch r = 1..c (bit of weight 2^{-r}, MSB-first) computes
    // h_delta(phi^r(x - 2^{-r-1})); output slot j = c + 1 - r restores the
    // LSB-first order of bin().  Layer plan, uniform across branches:
    //   layers 1..c-r      leading ReLUs (shift absorbed into layer 1)
    //   layers c-r+1..c    phi pairs
    //   layer  c+1         h_delta pair
    //   layer  c+2         affine readout
    const unsigned depth = c + 1;  // activated layers
    std::vector<Layer> layers(depth, relu_layer());
    Layer readout = affine_layer();
    readout.weights.assign(c, {});
    readout.bias.assign(c, Rational(0));

    // Rows already emitted per layer; branch blocks are appended in r-order.
    std::vector<std::size_t> width(depth, 0);
    for (unsigned r = 1; r <= c; ++r) {
        const Rational shift(BigInt(1), pow2(r + 1));
        std::size_t prev = 0;    // branch's row offset in the previous layer
        std::size_t nprev = 1;   // and its width (1 = shared input)
        bool from_input = true;
        for (unsigned t = 0; t < depth; ++t) {
            Layer& L = layers[t];
            const std::size_t cols = from_input ? 1 : width[t - 1];
            auto row = [&](std::size_t k, const Rational& w) {
                std::vector<Rational> v(cols, Rational(0));
                v[from_input ? 0 : prev + k] = w;
                return v;
            };
            const std::size_t here = width[t];
            if (t < c - r) {
                // Leading ReLU; the very first also applies the shift.
                L.weights.push_back(row(0, Rational(1)));
                L.bias.push_back(t == 0 ? -shift : Rational(0));
                width[t] += 1;
                prev = here, nprev = 1;
            } else if (t < c) {
                // phi pair on v (single row) or on u - v (pair).
                Rational b1(0), b2(-2);
                if (t == 0) b1 = shift * Rational(-2), b2 = b2 - shift * Rational(4);
                if (nprev == 1) {
                    L.weights.push_back(row(0, Rational(2)));
                    L.weights.push_back(row(0, Rational(4)));
                } else {
                    auto r1 = row(0, Rational(2));
                    r1[prev + 1] = Rational(-2);
                    auto r2 = row(0, Rational(4));
                    r2[prev + 1] = Rational(-4);
                    L.weights.push_back(std::move(r1));
                    L.weights.push_back(std::move(r2));
                }
                L.bias.push_back(b1);
                L.bias.push_back(b2);
                width[t] += 2;
                prev = here, nprev = 2;
            } else {
                // h_delta pair: [(y - 1/2 + delta/2)/delta]_+ minus the
                // same ramp shifted by delta.
                const Rational half(1, 2);
                auto r1 = row(0, Rational(1) / delta);
                r1[prev + 1] = Rational(-1) / delta;
                auto r2 = r1;
                L.weights.push_back(std::move(r1));
                L.weights.push_back(std::move(r2));
                L.bias.push_back((delta * half - half) / delta);
                L.bias.push_back((delta * half * Rational(-1) - half) / delta);
                width[t] += 2;
                prev = here, nprev = 2;
            }
            from_input = false;
        }
        auto& out = readout.weights[c - r];  // LSB-first slot
        out.assign(width[depth - 1], Rational(0));
        out[prev] = Rational(1);
        out[prev + 1] = Rational(-1);
    }
    // Branches finished before the widest layer was known: pad rows.
    for (unsigned t = 1; t < depth; ++t)
        for (auto& w : layers[t].weights) w.resize(width[t - 1], Rational(0));
    for (auto& w : readout.weights) w.resize(width[depth - 1], Rational(0));

    std::vector<Layer> all(std::move(layers));
    all.push_back(std::move(readout));
    return Network(1, std::move(all));
}

Network boolean_gadget(BoolGadget kind, int d) {
    if (d < 1) throw std::invalid_argument("boolean_gadget: need d >= 1");

    auto parity_readout = [](int units) {
        // [s]_+ + sum_{l>=1} 2(-1)^l [s-l]_+ reproduces s mod 2 for integer
        // s in [0, units]; the l = units term would vanish on that range.
        Layer out = affine_layer();
        std::vector<Rational> row;
        row.push_back(Rational(1));
        for (int l = 1; l < units; ++l) row.push_back(Rational(l % 2 ? -2 : 2));
        out.weights.push_back(std::move(row));
        out.bias.push_back(Rational(0));
        return out;
    };
    auto step_units = [&](int units, int fan_in) {
        Layer L = relu_layer();
        for (int l = 0; l < units; ++l) push_ones_row(L, fan_in, Rational(-l));
        return L;
    };
    auto and_pairs = [&](int pairs) {
        // Row i: [x_i + y_i - 1]_+ over 2*pairs inputs.
        Layer L = relu_layer();
        for (int i = 0; i < pairs; ++i) {
            std::vector<Rational> row(2 * static_cast<std::size_t>(pairs), Rational(0));
            row[i] = Rational(1);
            row[pairs + i] = Rational(1);
            L.weights.push_back(std::move(row));
            L.bias.push_back(Rational(-1));
        }
        return L;
    };

    switch (kind) {
        case BoolGadget::And: {
            Layer L = relu_layer();
            push_ones_row(L, d, Rational(1 - d));
            return Network(d, {std::move(L)});
        }
        case BoolGadget::Nor: {
            Layer L = relu_layer();
            L.weights.emplace_back(d, Rational(-1));
            L.bias.push_back(Rational(1));
            return Network(d, {std::move(L)});
        }
        case BoolGadget::Parity:
            return Network(d, {step_units(d, d), parity_readout(d)});
        case BoolGadget::Disj: {
            Layer nor = relu_layer();
            nor.weights.emplace_back(d, Rational(-1));
            nor.bias.push_back(Rational(1));
            return Network(2 * d, {and_pairs(d), std::move(nor)});
        }
        case BoolGadget::Ip:
            return Network(2 * d, {and_pairs(d), step_units(d, d), parity_readout(d)});
    }
    throw std::logic_error("boolean_gadget: unreachable");
}

Network threshold_output(const Network& net) {
    if (net.output_dim() != 1)
        throw std::invalid_argument("threshold_output: need scalar output");
    std::vector<Layer> layers = net.layers();

    Layer pair = relu_layer();
    Layer out = affine_layer();
    out.weights = {{Rational(1), Rational(-1)}};
    out.bias = {Rational(0)};

    if (!layers.back().activation) {
        // Fold 3N - {1,2} into the affine readout itself.
        Layer last = std::move(layers.back());
        layers.pop_back();
        std::vector<Rational> scaled = last.weights[0];
        for (auto& w : scaled) w = w * Rational(3);
        const Rational b3 = last.bias[0] * Rational(3);
        pair.weights = {scaled, scaled};
        pair.bias = {b3 - Rational(1), b3 - Rational(2)};
    } else {
        pair.weights = {{Rational(3)}, {Rational(3)}};
        pair.bias = {Rational(-1), Rational(-2)};
    }
    layers.push_back(std::move(pair));
    layers.push_back(std::move(out));
    return Network(net.input_dim(), std::move(layers));
}

Network binary_decoder(unsigned c) {
    if (c < 1) throw std::invalid_argument("binary_decoder: need c >= 1");
    Layer out = affine_layer();
    std::vector<Rational> row;
    const BigInt den = pow2(c);
    for (unsigned j = 1; j <= c; ++j) row.emplace_back(pow2(j - 1), den);
    out.weights.push_back(std::move(row));
    out.bias.push_back(Rational(0));
    return Network(static_cast<int>(c), {std::move(out)});
}

Network rounding_layer(int d) {
    if (d < 1) throw std::invalid_argument("rounding_layer: need d >= 1");
    Layer pairs = relu_layer();
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < 2; ++k) {
            std::vector<Rational> row(static_cast<std::size_t>(d), Rational(0));
            row[i] = Rational(2);
            pairs.weights.push_back(std::move(row));
            pairs.bias.push_back(k == 0 ? Rational(-1, 2) : Rational(-3, 2));
        }
    }
    Layer out = affine_layer();
    for (int i = 0; i < d; ++i) {
        std::vector<Rational> row(2 * static_cast<std::size_t>(d), Rational(0));
        row[2 * i] = Rational(1);
        row[2 * i + 1] = Rational(-1);
        out.weights.push_back(std::move(row));
        out.bias.push_back(Rational(0));
    }
    return Network(d, {std::move(pairs), std::move(out)});
}

Network agreement_network(const Network& g_net) {
    return compose(g_net, rounding_layer(g_net.input_dim()));
}

Network benign_approximator(const ThresholdCircuit& tc, unsigned c, int d,
                            const Rational& delta, bool deep_extractor) {
    if (tc.input_dim() != static_cast<int>(c) * d)
        throw std::invalid_argument("benign_approximator: circuit wants c*d input bits");
    if (tc.output_dim() != static_cast<int>(c))
        throw std::invalid_argument("benign_approximator: circuit must emit c bits");
    Network extractor = deep_extractor
        ? juxtapose(std::vector<Network>(static_cast<std::size_t>(d),
                                         bit_extractor_deep(c, delta)))
        : bit_extractor_shallow(c, delta, d);
    Network inner = compose(compile_to_relu(tc), std::move(extractor));
    return compose(binary_decoder(c), std::move(inner));
}

}  // namespace relulab
