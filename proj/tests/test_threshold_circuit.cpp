#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "relulab/threshold_circuit.hpp"

#include <map>
#include <random>
#include <vector>

using namespace relulab;

namespace {

Ltf gate(std::vector<long> w, long b) {
    Ltf g;
    for (long v : w) g.weights.emplace_back(v);
    g.bias = b;
    return g;
}

ThresholdCircuit and_gate() { return ThresholdCircuit(2, {{gate({1, 1}, -1)}}); }

std::vector<int> bits_of(unsigned long m, int d) {
    std::vector<int> v(d);
    for (int i = 0; i < d; ++i) v[i] = (m >> i) & 1;
    return v;
}

ThresholdCircuit random_circuit(std::mt19937_64& eng, int max_d, int max_gates) {
    const int d = 2 + static_cast<int>(eng() % static_cast<unsigned>(max_d - 1));
    const int depth = 1 + static_cast<int>(eng() % 3);
    auto coin = [&](long lo, long hi) {
        return static_cast<long>(eng() % static_cast<unsigned long>(hi - lo + 1)) + lo;
    };
    std::vector<std::vector<Ltf>> layers;
    int cols = d, budget = max_gates;
    for (int t = 0; t < depth; ++t) {
        const int gates = t == depth - 1
                              ? 1 + static_cast<int>(eng() % 2)
                              : 1 + static_cast<int>(eng() % 3);
        std::vector<Ltf> layer;
        for (int g = 0; g < gates && budget > 0; ++g, --budget) {
            std::vector<long> w;
            for (int k = 0; k < cols; ++k) w.push_back(coin(-3, 3));
            layer.push_back(gate(std::move(w), coin(-3, 3)));
        }
        cols = static_cast<int>(layer.size());
        layers.push_back(std::move(layer));
    }
    return ThresholdCircuit(d, std::move(layers));
}

}  // namespace

TEST_CASE("gate evaluation follows the zero-or-less convention") {
    const ThresholdCircuit a = and_gate();
    CHECK(a.evaluate({1, 1}) == std::vector<int>{1});
    CHECK(a.evaluate({1, 0}) == std::vector<int>{0});  // sign(0) = 0
    const ThresholdCircuit o(2, {{gate({1, 1}, 0)}});
    CHECK(o.evaluate({0, 0}) == std::vector<int>{0});
    CHECK(o.evaluate({0, 1}) == std::vector<int>{1});
    CHECK_THROWS(a.evaluate({1, 2}));
}

TEST_CASE("compiled pair reproduces the gate and clips to the unit interval") {
    const Network n = compile_to_relu(and_gate());
    CHECK(n.evaluate({Rational(1), Rational(1)})[0] == Rational(1));
    CHECK(n.evaluate({Rational(1), Rational(0)})[0] == Rational(0));
    // off the cube the pair still lands inside [0,1]
    CHECK(n.evaluate({Rational(1, 2), Rational(1, 2)})[0] == Rational(0));
    CHECK(n.evaluate({Rational(3, 2), Rational(3, 2)})[0] == Rational(1));
}

TEST_CASE("compiled size and depth bookkeeping") {
    // 3 gates over 2 layers, 1 output: network size 2*3+1, depth 2+1.
    const ThresholdCircuit tc(
        2, {{gate({1, 1}, -1), gate({1, 1}, 0)}, {gate({1, -1}, 0)}});
    const Network n = compile_to_relu(tc);
    CHECK(tc.size() == 3);
    CHECK(n.size() == 2 * 3 + 1);
    CHECK(n.depth() == tc.depth() + 1);
}

TEST_CASE("compiler matches the circuit on every Boolean input") {
    std::mt19937_64 eng(1009);
    for (int t = 0; t < 60; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 6, 12);
        const Network n = compile_to_relu(tc);
        for (unsigned long m = 0; m < (1UL << tc.input_dim()); ++m) {
            const std::vector<int> x = bits_of(m, tc.input_dim());
            const std::vector<int> want = tc.evaluate(x);
            const std::vector<Rational> got = n.evaluate_bits(x);
            REQUIRE(got.size() == want.size());
            for (std::size_t j = 0; j < want.size(); ++j)
                CHECK(got[j] == Rational(want[j]));
        }
    }
}

TEST_CASE("compiled outputs stay in the unit interval on real inputs") {
    std::mt19937_64 eng(2027);
    for (int t = 0; t < 20; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 5, 10);
        const Network n = compile_to_relu(tc);
        for (int i = 0; i < 100; ++i) {
            std::vector<Rational> x;
            for (int k = 0; k < n.input_dim(); ++k)
                x.push_back(Rational(static_cast<long>(eng() % 4001) - 2000, 1000));
            for (const Rational& v : n.evaluate(x)) {
                CHECK(v >= Rational(0));
                CHECK(v <= Rational(1));
            }
        }
    }
}

TEST_CASE("hardwiring folds assigned inputs into biases") {
    const ThresholdCircuit a = and_gate();
    const ThresholdCircuit a1 = hardwire(a, {{1, 1}});
    CHECK(a1.input_dim() == 1);
    CHECK(a1.evaluate({1}) == std::vector<int>{1});
    CHECK(a1.evaluate({0}) == std::vector<int>{0});
    CHECK(hardwire(a, {{1, 0}}).evaluate({1}) == std::vector<int>{0});
    CHECK(a1.size() == a.size());

    const ThresholdCircuit all = hardwire(a, {{0, 1}, {1, 1}});
    CHECK(all.input_dim() == 0);
    CHECK(all.evaluate({}) == std::vector<int>{1});
}

TEST_CASE("hardwire commutes with evaluation") {
    std::mt19937_64 eng(311);
    for (int t = 0; t < 30; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 5, 10);
        const int d = tc.input_dim();
        const int fixed = static_cast<int>(eng() % d);
        const int value = static_cast<int>(eng() & 1);
        const ThresholdCircuit h = hardwire(tc, {{fixed, value}});
        for (unsigned long m = 0; m < (1UL << (d - 1)); ++m) {
            const std::vector<int> rest = bits_of(m, d - 1);
            std::vector<int> full = rest;
            full.insert(full.begin() + fixed, value);
            CHECK(h.evaluate(rest) == tc.evaluate(full));
        }
    }
}

TEST_CASE("selector collapses a multi-output circuit to one output") {
    // two-output identity on two inputs
    const ThresholdCircuit id(2, {{gate({1, 0}, 0), gate({0, 1}, 0)}});
    const ThresholdCircuit sel = add_selector(id);
    CHECK(sel.input_dim() == 4);  // inputs then 2 selector bits
    CHECK(sel.output_dim() == 1);
    CHECK(sel.evaluate({1, 0, 1, 0}) == std::vector<int>{1});
    CHECK(sel.evaluate({1, 0, 0, 1}) == std::vector<int>{0});
}

TEST_CASE("hardwired selector recovers each output exhaustively") {
    std::mt19937_64 eng(555);
    for (int t = 0; t < 15; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 5, 10);
        const ThresholdCircuit sel = add_selector(tc);
        const int d = tc.input_dim(), q = tc.output_dim();
        for (int i = 0; i < q; ++i) {
            std::map<int, int> pick;
            for (int j = 0; j < q; ++j) pick[d + j] = j == i ? 1 : 0;
            const ThresholdCircuit wired = hardwire(sel, pick);
            for (unsigned long m = 0; m < (1UL << d); ++m) {
                const std::vector<int> x = bits_of(m, d);
                CHECK(wired.evaluate(x)[0] == tc.evaluate(x)[i]);
            }
        }
    }
}

TEST_CASE("truth table synthesis is exact") {
    const ThresholdCircuit xc = truth_table_to_circuit({0, 1, 1, 0});  // XOR
    for (unsigned long m = 0; m < 4; ++m) {
        const std::vector<int> x = bits_of(m, 2);
        CHECK(xc.evaluate(x)[0] == (x[0] ^ x[1]));
    }
    CHECK(truth_table_to_circuit({0, 0, 0, 0}).evaluate({1, 1})[0] == 0);
    CHECK(truth_table_to_circuit({1, 1, 1, 1}).evaluate({0, 1})[0] == 1);

    std::mt19937_64 eng(8888);
    for (int t = 0; t < 20; ++t) {
        const int d = 1 + static_cast<int>(eng() % 5);
        std::vector<int> table(1UL << d);
        for (auto& v : table) v = static_cast<int>(eng() & 1);
        const ThresholdCircuit tc = truth_table_to_circuit(table);
        for (unsigned long m = 0; m < table.size(); ++m)
            CHECK(tc.evaluate(bits_of(m, d))[0] == table[m]);
    }
}

TEST_CASE("shared-detector synthesis handles several tables at once") {
    std::mt19937_64 eng(1212);
    const int d = 4;
    std::vector<std::vector<int>> tables(3, std::vector<int>(1UL << d));
    for (auto& t : tables)
        for (auto& v : t) v = static_cast<int>(eng() & 1);
    const ThresholdCircuit tc = truth_tables_to_circuit(tables);
    CHECK(tc.output_dim() == 3);
    for (unsigned long m = 0; m < (1UL << d); ++m) {
        const std::vector<int> out = tc.evaluate(bits_of(m, d));
        for (int j = 0; j < 3; ++j) CHECK(out[j] == tables[j][m]);
    }
}

TEST_CASE("circuit JSON round trip") {
    std::mt19937_64 eng(99);
    for (int t = 0; t < 20; ++t) {
        const ThresholdCircuit tc = random_circuit(eng, 5, 8);
        const ThresholdCircuit back = circuit_from_json(circuit_to_json(tc));
        CHECK(back.input_dim() == tc.input_dim());
        CHECK(back.size() == tc.size());
        for (unsigned long m = 0; m < (1UL << tc.input_dim()); ++m)
            CHECK(back.evaluate(bits_of(m, tc.input_dim())) ==
                  tc.evaluate(bits_of(m, tc.input_dim())));
    }
}
