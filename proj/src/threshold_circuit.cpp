#include "relulab/threshold_circuit.hpp"

#include <fstream>
#include <stdexcept>

namespace relulab {

using nlohmann::json;
using nlohmann::ordered_json;

int Ltf::eval(const std::vector<int>& x) const {
    if (x.size() != weights.size()) throw std::invalid_argument("Ltf::eval: arity mismatch");
    BigInt z = bias;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (x[i] != 0 && x[i] != 1) throw std::invalid_argument("Ltf::eval: bits must be 0/1");
        if (x[i]) z += weights[i];
    }
    return z > 0 ? 1 : 0;
}

ThresholdCircuit::ThresholdCircuit(int input_dim, std::vector<std::vector<Ltf>> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    if (input_dim < 0) throw std::invalid_argument("ThresholdCircuit: negative input dim");
    if (layers_.empty()) throw std::invalid_argument("ThresholdCircuit: no layers");
    size_t prev = static_cast<size_t>(input_dim);
    for (const auto& layer : layers_) {
        if (layer.empty()) throw std::invalid_argument("ThresholdCircuit: empty layer");
        for (const auto& g : layer)
            if (g.weights.size() != prev)
                throw std::invalid_argument("ThresholdCircuit: gate arity mismatch");
        prev = layer.size();
    }
}

int ThresholdCircuit::size() const {
    int s = 0;
    for (const auto& l : layers_) s += static_cast<int>(l.size());
    return s;
}

std::vector<int> ThresholdCircuit::evaluate(const std::vector<int>& x) const {
    if (static_cast<int>(x.size()) != input_dim_)
        throw std::invalid_argument("ThresholdCircuit::evaluate: input length mismatch");
    std::vector<int> cur = x;
    for (const auto& layer : layers_) {
        std::vector<int> next(layer.size());
        for (size_t i = 0; i < layer.size(); ++i) next[i] = layer[i].eval(cur);
        cur = std::move(next);
    }
    return cur;
}

ThresholdCircuit hardwire(const ThresholdCircuit& tc, const std::map<int, int>& assignment) {
    for (const auto& [i, v] : assignment) {
        if (i < 0 || i >= tc.input_dim())
            throw std::invalid_argument("hardwire: input index out of range");
        if (v != 0 && v != 1) throw std::invalid_argument("hardwire: values must be 0/1");
    }
    std::vector<int> keep;
    for (int i = 0; i < tc.input_dim(); ++i)
        if (!assignment.count(i)) keep.push_back(i);

    auto layers = tc.layers();
    for (auto& g : layers[0]) {
        BigInt b = g.bias;
        std::vector<BigInt> w;
        w.reserve(keep.size());
        for (int i = 0; i < tc.input_dim(); ++i) {
            auto it = assignment.find(i);
            if (it == assignment.end())
                w.push_back(g.weights[i]);
            else if (it->second)
                b += g.weights[i];
        }
        g.weights = std::move(w);
        g.bias = b;
    }
    return ThresholdCircuit(static_cast<int>(keep.size()), std::move(layers));
}

ThresholdCircuit add_selector(const ThresholdCircuit& tc) {
    int d = tc.input_dim();
    int l = tc.output_dim();
    int m = tc.depth();
    std::vector<std::vector<Ltf>> layers;
    layers.reserve(m + 2);
    // inner layers: original gates first, then l identity gates carrying the
    // selector bits (sign(t) = t on bits)
    for (int t = 0; t < m; ++t) {
        const auto& src = tc.layers()[t];
        size_t prev = t == 0 ? static_cast<size_t>(d + l) : tc.layers()[t - 1].size() + l;
        std::vector<Ltf> layer;
        layer.reserve(src.size() + l);
        for (const auto& g : src) {
            Ltf ng;
            ng.weights.assign(prev, BigInt(0));
            for (size_t i = 0; i < g.weights.size(); ++i) ng.weights[i] = g.weights[i];
            ng.bias = g.bias;
            layer.push_back(std::move(ng));
        }
        size_t sel0 = t == 0 ? static_cast<size_t>(d) : tc.layers()[t - 1].size();
        for (int j = 0; j < l; ++j) {
            Ltf id;
            id.weights.assign(prev, BigInt(0));
            id.weights[sel0 + j] = 1;
            id.bias = 0;
            layer.push_back(std::move(id));
        }
        layers.push_back(std::move(layer));
    }
    // AND layer: out_i AND sel_i
    size_t prev = tc.layers()[m - 1].size() + l;
    std::vector<Ltf> ands;
    ands.reserve(l);
    for (int i = 0; i < l; ++i) {
        Ltf a;
        a.weights.assign(prev, BigInt(0));
        a.weights[i] = 1;
        a.weights[tc.layers()[m - 1].size() + i] = 1;
        a.bias = -1;
        ands.push_back(std::move(a));
    }
    layers.push_back(std::move(ands));
    // OR gate
    Ltf org;
    org.weights.assign(l, BigInt(1));
    org.bias = 0;
    layers.push_back({std::move(org)});
    return ThresholdCircuit(d + l, std::move(layers));
}

namespace {

int table_dim(size_t len) {
    int d = 0;
    while ((size_t{1} << d) < len) ++d;
    if ((size_t{1} << d) != len || d == 0)
        throw std::invalid_argument("truth table length must be 2^d, d >= 1");
    if (d > 16) throw std::invalid_argument("truth table synthesis guarded to d <= 16");
    return d;
}

Ltf detector_for(unsigned pattern, int d) {
    // fires exactly on its pattern: +1 on set bits, -1 on clear bits,
    // bias 1 - popcount(pattern)
    Ltf g;
    g.weights.assign(d, BigInt(0));
    int pc = 0;
    for (int j = 0; j < d; ++j) {
        if (pattern >> j & 1u) {
            g.weights[j] = 1;
            ++pc;
        } else {
            g.weights[j] = -1;
        }
    }
    g.bias = 1 - pc;
    return g;
}

Ltf constant_gate(int d, int value) {
    Ltf g;
    g.weights.assign(d, BigInt(0));
    g.bias = value ? 1 : 0;
    return g;
}

Ltf or_gate(size_t fan_in, const std::vector<size_t>& ones) {
    Ltf g;
    g.weights.assign(fan_in, BigInt(0));
    for (size_t i : ones) g.weights[i] = 1;
    g.bias = 0;
    return g;
}

}  // namespace

ThresholdCircuit truth_table_to_circuit(const std::vector<int>& table) {
    int d = table_dim(table.size());
    std::vector<size_t> ones;
    for (size_t i = 0; i < table.size(); ++i) {
        if (table[i] != 0 && table[i] != 1)
            throw std::invalid_argument("truth table entries must be 0/1");
        if (table[i]) ones.push_back(i);
    }
    std::vector<Ltf> detectors;
    if (ones.empty() || ones.size() == table.size()) {
        detectors.push_back(constant_gate(d, ones.empty() ? 0 : 1));
    } else {
        detectors.reserve(ones.size());
        for (size_t i : ones) detectors.push_back(detector_for(static_cast<unsigned>(i), d));
    }
    std::vector<size_t> all(detectors.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    Ltf out = or_gate(detectors.size(), all);
    return ThresholdCircuit(d, {std::move(detectors), {std::move(out)}});
}

ThresholdCircuit truth_tables_to_circuit(const std::vector<std::vector<int>>& tables) {
    if (tables.empty()) throw std::invalid_argument("truth_tables_to_circuit: no tables");
    int d = table_dim(tables[0].size());
    for (const auto& t : tables)
        if (t.size() != tables[0].size())
            throw std::invalid_argument("truth_tables_to_circuit: tables must share length");
    // shared detector layer over the union of 1-entries
    std::vector<size_t> patterns;
    std::map<size_t, size_t> index_of;
    for (const auto& t : tables)
        for (size_t i = 0; i < t.size(); ++i) {
            if (t[i] != 0 && t[i] != 1)
                throw std::invalid_argument("truth table entries must be 0/1");
            if (t[i] && !index_of.count(i)) {
                index_of[i] = patterns.size();
                patterns.push_back(i);
            }
        }
    std::vector<Ltf> detectors;
    if (patterns.empty()) {
        detectors.push_back(constant_gate(d, 0));
    } else {
        detectors.reserve(patterns.size());
        for (size_t p : patterns) detectors.push_back(detector_for(static_cast<unsigned>(p), d));
    }
    std::vector<Ltf> outs;
    outs.reserve(tables.size());
    for (const auto& t : tables) {
        std::vector<size_t> mine;
        for (size_t i = 0; i < t.size(); ++i)
            if (t[i]) mine.push_back(index_of.at(i));
        outs.push_back(or_gate(detectors.size(), mine));
    }
    return ThresholdCircuit(d, {std::move(detectors), std::move(outs)});
}

Network compile_to_relu(const ThresholdCircuit& tc) {
    std::vector<Layer> layers;
    layers.reserve(tc.depth() + 1);
    for (int t = 0; t < tc.depth(); ++t) {
        const auto& gates = tc.layers()[t];
        int prev_cols = t == 0 ? tc.input_dim() : 2 * static_cast<int>(tc.layers()[t - 1].size());
        Layer L;
        L.activation = Activation::relu();
        L.weights.reserve(2 * gates.size());
        L.bias.reserve(2 * gates.size());
        for (const auto& g : gates) {
            std::vector<Rational> row(prev_cols, Rational(0));
            if (t == 0) {
                for (size_t i = 0; i < g.weights.size(); ++i) row[i] = Rational(g.weights[i]);
            } else {
                // previous gate value is the pair difference n1 - n2
                for (size_t i = 0; i < g.weights.size(); ++i) {
                    row[2 * i] = Rational(g.weights[i]);
                    row[2 * i + 1] = Rational(BigInt(-g.weights[i]));
                }
            }
            L.weights.push_back(row);
            L.bias.push_back(Rational(g.bias));
            L.weights.push_back(std::move(row));
            L.bias.push_back(Rational(g.bias) - Rational(1));
        }
        layers.push_back(std::move(L));
    }
    // affine readout of the q output pairs
    int q = tc.output_dim();
    Layer out;
    out.activation = std::nullopt;
    out.weights.assign(q, std::vector<Rational>(2 * q, Rational(0)));
    out.bias.assign(q, Rational(0));
    for (int o = 0; o < q; ++o) {
        out.weights[o][2 * o] = Rational(1);
        out.weights[o][2 * o + 1] = Rational(-1);
    }
    layers.push_back(std::move(out));
    return Network(tc.input_dim(), std::move(layers));
}

ordered_json compile_provenance(const ThresholdCircuit& tc) {
    ordered_json pairs = ordered_json::array();
    for (int t = 0; t < tc.depth(); ++t)
        for (size_t i = 0; i < tc.layers()[t].size(); ++i)
            pairs.push_back(ordered_json{{"gate", {t, i}},
                                         {"neurons", {{t, 2 * i}, {t, 2 * i + 1}}}});
    return ordered_json{{"construction", "tc-to-relu-compiler"}, {"gate_pairs", pairs}};
}

ordered_json circuit_to_json(const ThresholdCircuit& tc) {
    ordered_json j;
    j["input_dim"] = tc.input_dim();
    ordered_json layers = ordered_json::array();
    for (const auto& layer : tc.layers()) {
        ordered_json lj;
        ordered_json w = ordered_json::array();
        ordered_json b = ordered_json::array();
        for (const auto& g : layer) {
            ordered_json row = ordered_json::array();
            for (const auto& wi : g.weights) row.push_back(wi.get_str());
            w.push_back(std::move(row));
            b.push_back(g.bias.get_str());
        }
        lj["weights"] = std::move(w);
        lj["bias"] = std::move(b);
        lj["activation"] = "sign";
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    return j;
}

namespace {

BigInt bigint_from_json(const json& v) {
    if (v.is_string()) return BigInt(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<long>());
    throw std::invalid_argument("circuit json: integer weight expected");
}

}  // namespace

ThresholdCircuit circuit_from_json(const json& j) {
    int input_dim = j.at("input_dim").get<int>();
    std::vector<std::vector<Ltf>> layers;
    for (const auto& lj : j.at("layers")) {
        if (lj.contains("activation") && lj.at("activation") != "sign")
            throw std::invalid_argument("circuit json: activation must be \"sign\"");
        const auto& w = lj.at("weights");
        const auto& b = lj.at("bias");
        if (w.size() != b.size()) throw std::invalid_argument("circuit json: weights/bias mismatch");
        std::vector<Ltf> layer;
        for (size_t i = 0; i < w.size(); ++i) {
            Ltf g;
            for (const auto& wi : w[i]) g.weights.push_back(bigint_from_json(wi));
            g.bias = bigint_from_json(b[i]);
            layer.push_back(std::move(g));
        }
        layers.push_back(std::move(layer));
    }
    return ThresholdCircuit(input_dim, std::move(layers));
}

ThresholdCircuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open circuit file: " + path);
    json j;
    in >> j;
    return circuit_from_json(j);
}

void save_circuit(const ThresholdCircuit& tc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write circuit file: " + path);
    out << circuit_to_json(tc).dump(2) << "\n";
}

}  // namespace relulab
