#pragma once

#include "relulab/network.hpp"
#include "relulab/threshold_circuit.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace relulab {

// Two-player split of the input coordinates: Alice holds alice[i], Bob the
// rest. Both sides must be nonempty.
struct Partition {
    std::vector<int> alice;
    std::vector<int> bob;

    Partition(int dim, std::vector<int> alice_indices);

    // Convenience splits for sweeps: low half / high half, even / odd.
    static Partition halves(int dim);
    static Partition alternating(int dim);
};

// Public coin source. Both players see the same stream; replaying a seed
// replays every protocol decision bit for bit.
class SharedRandomness {
public:
    explicit SharedRandomness(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }
    bool bit();
    std::uint64_t word() { return eng_(); }
    BigInt mask(int nbits);  // uniform nbits-bit integer

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    std::uint64_t buf_ = 0;
    int avail_ = 0;
};

// One communication event. The randomized model sends plain bits; the real
// model's referee hears two exact reals per round and announces one bit
// (alpha > beta), which is all that ever lands in the word w.
struct TranscriptEvent {
    enum class Kind { Bit, Referee };
    Kind kind = Kind::Bit;
    int speaker = 0;  // 0 = Alice, 1 = Bob; -1 for referee announcements
    int bit = 0;
    Rational alpha;   // referee rounds only
    Rational beta;
};

struct Transcript {
    std::vector<TranscriptEvent> events;

    // Both models charge one bit per event: sent bits in the randomized
    // model, referee announcements in the real model.
    long cost() const { return static_cast<long>(events.size()); }

    void say(int speaker, int bit);
    void referee(Rational alpha, Rational beta, int bit);
};

nlohmann::ordered_json transcript_to_json(const Transcript& t, int output_bit);

struct GtOutcome {
    bool greater;  // a > b
    long cost;     // bits exchanged
};

// Shared-randomness greater-than: noisy binary search for the longest common
// prefix of the two bit_len+1-bit operands (offset to positive), comparing
// prefixes by k random-parity fingerprints (k = ceil(log2((r+1)/eps)) for r
// search rounds; short prefixes are sent raw, which also makes small
// instances zero-error). One-sided per-check error 2^-k, union-bounded to
// eps overall; cost is at most 8 * max(1, log2 bit_len) * log2(bit_len/eps).
GtOutcome randomized_gt(const BigInt& a, const BigInt& b, int bit_len,
                        const Rational& eps, SharedRandomness& rnd,
                        Transcript* transcript = nullptr);

struct BitOutcome {
    int bit;
    long cost;
};

// Threshold gate as a two-party problem: Alice accumulates her side of the
// inner product, Bob folds his side into the threshold, and one greater-than
// resolves the gate. Correct with probability >= 1 - eps.
BitOutcome evaluate_ltf_randomized(const Ltf& ltf, const Partition& p,
                                   const std::vector<int>& x, const Rational& eps,
                                   SharedRandomness& rnd,
                                   Transcript* transcript = nullptr);

// Real-referee version: one round, zero error, cost exactly 1.
BitOutcome evaluate_ltf_real(const Ltf& ltf, const Partition& p,
                             const std::vector<int>& x,
                             Transcript* transcript = nullptr);

struct ProtocolResult {
    int bit;
    Transcript transcript;
};

// Resolves the network neuron by neuron (layer-major): each ReLU/Sign costs
// one greater-than at error eps_per_neuron, a k-piece activation costs a
// ceil(log2 k)-step binary search over its breakpoints with the budget split
// across steps, and a trailing affine readout costs one extra comparison
// against 1/2. Output bit correct with probability >= 1 - size * eps_per_neuron.
ProtocolResult eval_network_randomized(const Network& net, const Partition& p,
                                       const std::vector<int>& x,
                                       const Rational& eps_per_neuron,
                                       SharedRandomness& rnd);

// Uniform operand width used for every greater-than inside a network run:
// the scaled worst-case pre-activation magnitude, floored at the input
// dimension (the width of the weight-precision class, so the per-neuron
// cost scales with the dimension the cost law is stated against rather
// than with whatever small weights a particular construction carries).
int protocol_bit_len(const Network& net);

// Default per-neuron budget for a total error target: eps_total / (2 size).
Rational per_neuron_budget(const Network& net, const Rational& eps_total);

// Real-referee evaluation: one referee round per neuron (ceil(log2 k) for
// k-piece activations), zero error, cost = neuron count for ReLU/Sign
// networks, readout included.
ProtocolResult eval_network_real(const Network& net, const Partition& p,
                                 const std::vector<Rational>& x);
ProtocolResult eval_network_real(const Network& net, const Partition& p,
                                 const std::vector<int>& x);

// Same, gate by gate over a threshold circuit: cost = gate count.
ProtocolResult eval_network_real(const ThresholdCircuit& tc, const Partition& p,
                                 const std::vector<int>& x);

// Random self-correction for inner product: with shared random x', y', the
// XOR of evaluations at (x^x', y^y'), (x^x', y'), (x', y^y') and the locally
// computed (x', y') recovers IP(x, y) as long as all four reads are right.
// net_prime maps {0,1}^{2d} -> {0,1}; the first three reads run the
// randomized network protocol. corrupt, when set, flips the network's answer
// on inputs it selects (fault injection for the error-propagation bound).
int ip_self_correct(const Network& net_prime, const Partition& p,
                    const std::vector<int>& x, const std::vector<int>& y,
                    const Rational& eps_per_neuron, SharedRandomness& rnd,
                    const std::function<bool(const std::vector<int>&)>& corrupt = nullptr,
                    Transcript* transcript = nullptr);

}  // namespace relulab
