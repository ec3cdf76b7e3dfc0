#pragma once

#include "relulab/comm.hpp"
#include "relulab/fixed_point.hpp"
#include "relulab/gadgets.hpp"
#include "relulab/lifted.hpp"
#include "relulab/network.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace relulab {

// Machine-readable experiment result. Reports are pure functions of
// (parameters, seed): same inputs, byte-identical JSON.
struct ExperimentReport {
    std::string name;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    bool pass = false;

    nlohmann::ordered_json to_json() const;
};

// Double-precision mirror of a network. Forward passes are bit-exact
// whenever weights and inputs are dyadic with few enough mantissa bits
// (true for the constructions here fed 30-bit dyadic samples); experiments
// that classify against thresholds re-verify borderline reads exactly.
class DoubleView {
public:
    explicit DoubleView(const Network& net);
    std::vector<double> evaluate(const std::vector<double>& x) const;

private:
    struct Row {
        std::vector<double> w;
        double b;
    };
    struct DLayer {
        std::vector<Row> rows;
        bool activated;
        std::vector<double> breakpoints, slopes, intercepts;
    };
    std::vector<DLayer> layers_;
    int input_dim_;
};

// Boolean-input view of a scalar-output network: evaluates on bits and
// thresholds the output at 1/2. Integer-weight networks with comfortable
// magnitude bounds run on int64 (still exact); everything else falls back
// to rationals.
std::function<int(const std::vector<int>&)> network_bit_oracle(const Network& net);
std::function<int(const std::vector<int>&)> circuit_bit_oracle(const ThresholdCircuit& tc);

// Deterministic dyadic sampler for the supported input distributions; every
// coordinate is an exactly-representable 30-bit rational.
class CubeSampler {
public:
    CubeSampler(CubeDistribution mu, int dim, std::uint64_t seed);
    std::vector<Rational> next();
    static double to_double(const Rational& r) { return r.to_double(); }

private:
    CubeDistribution mu_;
    int dim_;
    std::mt19937_64 eng_;
};

// ---- L2 distances -----------------------------------------------------

// E over uniform {0,1}^d of (f-g)^2, exact. d <= 20.
Rational l2_squared_boolean(const std::function<Rational(const std::vector<int>&)>& f,
                            const std::function<Rational(const std::vector<int>&)>& g,
                            int d);

// Exact piecewise description of a single-input network on [lo, hi]:
// consecutive segments with the affine form valid on each.
struct UnivariatePiece {
    Rational lo, hi;
    AffineForm form;
};
std::vector<UnivariatePiece> univariate_pieces(const Network& net,
                                               const Rational& lo,
                                               const Rational& hi);

// Integral over uniform [0,1] of (a(x) - b(x))^2, exact via the piecewise
// decomposition (both networks must take one input).
Rational l2_squared_univariate(const Network& a, const Network& b);

// Integral over CornerCubes of (a - b)^2 for two lifts of equal variant:
// the bumps plateau on every corner cube, so the integrand is cube-wise
// constant; the engine verifies that at the cube vertices before summing.
// d <= 3.
Rational l2_squared_corner_lifts(const LiftedFunction& a, const LiftedFunction& b);

struct McEstimate {
    double mean = 0;       // estimate of E (f-g)^2
    double std_error = 0;  // standard error of the mean
    long samples = 0;
};
McEstimate l2_squared_monte_carlo(
    const std::function<double(const std::vector<double>&)>& f,
    const std::function<double(const std::vector<double>&)>& g, int dim,
    CubeDistribution mu, long n, std::uint64_t seed);

// ---- Experiments ------------------------------------------------------

// Compares two bit-valued evaluables on all 2^d inputs; d <= 20.
ExperimentReport exhaustive_equivalence(
    const std::string& label, const std::function<int(const std::vector<int>&)>& a,
    const std::function<int(const std::vector<int>&)>& b, int d);

// Exact corner-cube integration vs the closed-form Hamming/(16 * 2^d).
ExperimentReport packing_distance_check(int d, const std::vector<int>& psi,
                                        const std::vector<int>& psi_prime);

struct ExtractorConfig {
    unsigned c = 8;
    Rational delta;  // defaults to default_delta(c) when zero
    int d = 1;
    bool deep = false;
};
// Empirical probability that some extracted bit misses bin(trunc(x_i)).
ExperimentReport extractor_failure_rate(const ExtractorConfig& cfg,
                                        CubeDistribution mu, long n,
                                        double threshold, std::uint64_t seed);

struct CostSweepConfig {
    enum class Model { Randomized, Real };
    enum class Family { Disj, Ip };
    Model model = Model::Randomized;
    Family family = Family::Disj;
    std::vector<int> dims = {8, 16, 32, 64};
    int partitions_per_dim = 20;  // all partitions when the input is small
    int inputs_per_partition = 5;
    Rational eps_per_neuron = Rational(1, 1000);
};
// Max observed protocol cost per gadget dimension, with the per-run bound
// and (randomized model) the fitted growth exponent of the log d factor.
ExperimentReport cost_sweep(const CostSweepConfig& cfg, std::uint64_t seed);
std::string cost_table_csv(const ExperimentReport& report);

struct PipelineConfig {
    int d = 1;
    unsigned c = 4;
    Rational delta;  // defaults to default_delta(c) when zero
    CubeDistribution mu = CubeDistribution::UniformCube;
    Rational lipschitz_bound = Rational(1);  // declared L of f
    // Exact oracle for f: [0,1]^d -> [0,1]; drives truth-table synthesis.
    std::function<Rational(const std::vector<Rational>&)> f;
    // Piecewise-affine form of f as a network; enables exact error
    // integration at d = 1.
    std::optional<Network> f_net;
    long mc_samples = 100000;
};
// Grid-truncates f to a truth table, synthesizes the threshold circuit,
// assembles the approximator, and checks the measured L2 error against
// L sqrt(d) 2^-c + 2^-c + sqrt(failure mass).
ExperimentReport pipeline_check(const PipelineConfig& cfg, std::uint64_t seed);

}  // namespace relulab
