#pragma once

#include "relulab/rational.hpp"

#include <optional>
#include <vector>

namespace relulab {

enum class ActKind { Relu, Sign, Pwl };

// Piecewise activation with k pieces separated by k-1 strictly increasing
// breakpoints. Piece selection is left-open/right-closed: z <= c_1 picks
// piece 0, c_i < z <= c_{i+1} picks piece i, z > c_{k-1} picks piece k-1.
// ReLU is the 2-piece instance (0, identity) around 0, so a pre-activation
// of exactly 0 lands in piece 0 ("inactive"). Sign is the 2-piece step
// (0, 1): sign(z) = 0 for z <= 0 and 1 for z > 0.
struct Activation {
    ActKind kind = ActKind::Relu;
    std::vector<Rational> breakpoints;
    std::vector<Rational> slopes;      // one per piece
    std::vector<Rational> intercepts;  // one per piece

    static Activation relu();
    static Activation sign();
    static Activation pwl(std::vector<Rational> breakpoints,
                          std::vector<Rational> slopes,
                          std::vector<Rational> intercepts);

    int piece_count() const { return static_cast<int>(slopes.size()); }
    int piece_of(const Rational& z) const;
    Rational apply(const Rational& z) const;

    bool operator==(const Activation& o) const;
};

// One layer: rows x prev_dim weight matrix, bias per row, and an activation
// shared by the rows. A layer without activation is purely affine; such
// layers are only valid as the final (readout) layer.
struct Layer {
    std::vector<std::vector<Rational>> weights;
    std::vector<Rational> bias;
    std::optional<Activation> activation;

    int rows() const { return static_cast<int>(weights.size()); }
    int cols() const { return weights.empty() ? 0 : static_cast<int>(weights[0].size()); }
};

// coef . x + bias
struct AffineForm {
    std::vector<Rational> coef;
    Rational bias;

    Rational eval(const std::vector<Rational>& x) const;
};

// Piece index per activated neuron, layer-major row order. Rows of an
// activation-free readout layer carry no entry. For ReLU networks the
// entries are the usual active(1)/inactive(0) bits.
struct ActivationPattern {
    std::vector<int> pieces;

    bool operator==(const ActivationPattern& o) const { return pieces == o.pieces; }
};

class Network {
public:
    Network(int input_dim, std::vector<Layer> layers);

    int input_dim() const { return input_dim_; }
    int output_dim() const { return layers_.back().rows(); }
    int depth() const { return static_cast<int>(layers_.size()); }

    // Total neuron count: every row of every layer, readout rows included.
    int size() const;

    // Rows carrying an activation (the pattern length).
    int activated_count() const;

    const std::vector<Layer>& layers() const { return layers_; }

    std::vector<Rational> evaluate(const std::vector<Rational>& x) const;
    std::vector<Rational> evaluate_bits(const std::vector<int>& bits) const;

    ActivationPattern activation_pattern(const std::vector<Rational>& x) const;

    // Exact affine form of each output once every activated neuron is pinned
    // to a piece. evaluate(x) == collapse(activation_pattern(x)).eval(x).
    std::vector<AffineForm> collapse_to_affine(const ActivationPattern& pattern) const;

    // lcm of every denominator appearing in weights, biases and breakpoints.
    BigInt denominator_lcm() const;

    // Upper bound on |pre-activation| of every neuron for inputs in [-1,1]^d
    // (so in particular on {0,1}^d), maximized over activation pieces.
    Rational preactivation_bound() const;

private:
    int input_dim_;
    std::vector<Layer> layers_;
};

// outer(inner(x)). If inner ends in an affine readout it is merged into
// outer's first layer, so chains like decoder . circuit . extractor collapse
// to the layer counts the constructions advertise.
Network compose(const Network& outer, const Network& inner);

// Block-diagonal combination: inputs and outputs concatenated. Blocks must
// have equal depth and matching activations level by level; depth padding is
// not supported (it would either add counted rows or mix activation kinds
// inside a layer).
Network juxtapose(const std::vector<Network>& blocks);

// Walks neurons in layer-major order, exposing each neuron's pre-activation
// as an exact affine form in the network inputs. The caller resolves each
// activated neuron to a piece (however it likes - by value, or by running a
// comparison protocol) and the walker propagates the implied affine outputs.
// This is the single engine behind collapse_to_affine and the communication
// protocols.
class CollapseWalker {
public:
    explicit CollapseWalker(const Network& net);

    bool done() const;
    int layer_index() const { return layer_; }
    int row_index() const { return row_; }
    const AffineForm& pre_affine() const;
    const std::optional<Activation>& activation() const;

    // Pins the current neuron's piece (ignored for readout rows; pass 0) and
    // advances. Readout rows propagate their affine form unchanged.
    void resolve(int piece);

    // Affine outputs of the final layer; valid once done().
    const std::vector<AffineForm>& outputs() const;

private:
    void enter_layer();

    const Network& net_;
    int layer_ = 0;
    int row_ = 0;
    std::vector<AffineForm> prev_;     // outputs of layers < layer_
    std::vector<AffineForm> pre_;      // pre-activations of layer_
    std::vector<AffineForm> resolved_; // outputs of layer_ rows < row_
};

}  // namespace relulab
