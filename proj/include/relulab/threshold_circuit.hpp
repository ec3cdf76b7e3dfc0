#pragma once

#include "relulab/network.hpp"

#include <json.hpp>

#include <map>
#include <vector>

namespace relulab {

// Linear threshold gate over bits: value = sign(<weights,x> + bias) with
// sign(z) = 1 iff z > 0. Integer weights only; rational-weight thresholds
// over finite inputs can always be rescaled before they get here.
struct Ltf {
    std::vector<BigInt> weights;
    BigInt bias;

    int eval(const std::vector<int>& x) const;
};

// Strictly layered threshold circuit: layer 1 reads the input bits, layer t
// reads the outputs of layer t-1, the last layer's gates are the outputs.
// size = total gate count, depth = layer count.
class ThresholdCircuit {
public:
    ThresholdCircuit(int input_dim, std::vector<std::vector<Ltf>> layers);

    int input_dim() const { return input_dim_; }
    int depth() const { return static_cast<int>(layers_.size()); }
    int output_dim() const { return static_cast<int>(layers_.back().size()); }
    int size() const;

    const std::vector<std::vector<Ltf>>& layers() const { return layers_; }

    std::vector<int> evaluate(const std::vector<int>& x) const;

private:
    int input_dim_;
    std::vector<std::vector<Ltf>> layers_;
};

// Fixes some inputs to constants by folding them into first-layer biases
// (bias b, weight w, x_i := v  =>  b + w*v). Remaining inputs keep their
// relative order. Gate count and depth are unchanged.
ThresholdCircuit hardwire(const ThresholdCircuit& tc, const std::map<int, int>& assignment);

// Collapses a q-output circuit to one output computing OR_i(sel_i AND out_i),
// with q selector bits appended after the original inputs. Selector bits ride
// identity gates through the inner layers (strict layering), then one AND
// layer and an OR gate. Hardwiring the selector to the i-th indicator
// recovers output i exactly.
ThresholdCircuit add_selector(const ThresholdCircuit& tc);

// Depth-2 synthesis of an arbitrary truth table: one detector gate per
// 1-entry (fires exactly on its pattern) plus an OR gate. Table index i
// encodes the input with x[j] = bit j of i (LSB-first). Constant tables
// short-circuit to a 2-gate constant circuit. Guarded to d <= 16.
ThresholdCircuit truth_table_to_circuit(const std::vector<int>& table);

// Multi-output variant sharing one detector layer across all tables.
ThresholdCircuit truth_tables_to_circuit(const std::vector<std::vector<int>>& tables);

// Gate (w,b) -> ReLU pair [<w,y>+b]_+ - [<w,y>+b-1]_+, which equals
// sign(<w,y>+b) whenever <w,y>+b is an integer; pair differences feed the
// next layer and a final affine layer reads out the q output pairs. Depth
// m+1, size exactly 2s+q, and every output lies in [0,1] for arbitrary real
// inputs (the pair difference clips to [0,1] unconditionally).
Network compile_to_relu(const ThresholdCircuit& tc);

// Mapping neuron pairs of compile_to_relu back to their source gates, in a
// form ready to embed as a provenance field next to the emitted network.
nlohmann::ordered_json compile_provenance(const ThresholdCircuit& tc);

// Circuit <-> JSON, mirroring the network schema with "activation": "sign"
// and integer weights serialized as decimal strings.
nlohmann::ordered_json circuit_to_json(const ThresholdCircuit& tc);
ThresholdCircuit circuit_from_json(const nlohmann::json& j);
ThresholdCircuit load_circuit(const std::string& path);
void save_circuit(const ThresholdCircuit& tc, const std::string& path);

}  // namespace relulab
