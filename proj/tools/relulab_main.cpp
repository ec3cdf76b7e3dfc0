// relulab: build, inspect and exercise the constructions from the command
// line. Networks and circuits travel as JSON files; experiments emit
// machine-readable reports and exit 0 iff the verdict is pass.

#include "relulab/comm.hpp"
#include "relulab/gadgets.hpp"
#include "relulab/lab.hpp"
#include "relulab/lifted.hpp"
#include "relulab/network_io.hpp"
#include "relulab/threshold_circuit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using relulab::Rational;
using json = nlohmann::ordered_json;

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << j.dump(2) << '\n';
}

void emit_text(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << text;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    json j;
    f >> j;
    return j;
}

std::vector<int> parse_bits(const std::string& s) {
    std::vector<int> bits;
    bits.reserve(s.size());
    for (char c : s) {
        if (c == '0' || c == '1')
            bits.push_back(c - '0');
        else if (c != ' ' && c != ',')
            throw std::runtime_error(std::string("bad bit character: ") + c);
    }
    return bits;
}

std::vector<Rational> parse_point(const std::string& s) {
    std::vector<Rational> x;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) x.push_back(Rational::from_string(tok));
    return x;
}

// SPEC is "half", "alt", or a comma list of Alice's coordinate indices.
relulab::Partition parse_partition(const std::string& spec, int dim) {
    if (spec == "half") return relulab::Partition::halves(dim);
    if (spec == "alt") return relulab::Partition::alternating(dim);
    std::vector<int> alice;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) alice.push_back(std::stoi(tok));
    return relulab::Partition(dim, std::move(alice));
}

json prov(const std::string& construction, json params) {
    return json{{"construction", construction}, {"parameters", std::move(params)}};
}

relulab::BoolGadget parse_gadget_kind(const std::string& s) {
    if (s == "and") return relulab::BoolGadget::And;
    if (s == "nor") return relulab::BoolGadget::Nor;
    if (s == "parity") return relulab::BoolGadget::Parity;
    if (s == "disj") return relulab::BoolGadget::Disj;
    if (s == "ip") return relulab::BoolGadget::Ip;
    throw std::runtime_error("unknown gadget kind: " + s);
}

relulab::CubeDistribution parse_mu(const std::string& s) {
    if (s == "cube") return relulab::CubeDistribution::UniformCube;
    if (s == "corners") return relulab::CubeDistribution::CornerCubes;
    if (s == "boolean") return relulab::CubeDistribution::UniformBoolean;
    throw std::runtime_error("unknown distribution: " + s);
}

relulab::LiftVariant parse_variant(const std::string& s) {
    if (s == "four-lipschitz") return relulab::LiftVariant::FourLipschitz;
    if (s == "quarter-height") return relulab::LiftVariant::QuarterHeight;
    throw std::runtime_error("unknown lift variant: " + s);
}

std::vector<int> table_from_string(const std::string& s) {
    std::vector<int> t = parse_bits(s);
    if (t.empty()) throw std::runtime_error("empty truth table");
    return t;
}

// ---- lab experiment dispatch -------------------------------------------

// Scalar-output evaluable over bits, from a network file or "constant:p/q".
std::function<Rational(const std::vector<int>&)> rational_operand(const std::string& spec) {
    const std::string prefix = "constant:";
    if (spec.rfind(prefix, 0) == 0) {
        const Rational v = Rational::from_string(spec.substr(prefix.size()));
        return [v](const std::vector<int>&) { return v; };
    }
    relulab::Network net = relulab::load_network(spec);
    if (net.output_dim() != 1)
        throw std::runtime_error("operand must have a scalar output: " + spec);
    return [net](const std::vector<int>& x) { return net.evaluate_bits(x)[0]; };
}

relulab::ExperimentReport run_equivalence(const json& p) {
    const int d = p.at("bits").get<int>();
    const std::string label = p.value("label", std::string("equivalence"));
    auto bit_operand = [](const json& spec) {
        if (spec.is_object() && spec.contains("gadget")) {
            return relulab::network_bit_oracle(relulab::boolean_gadget(
                parse_gadget_kind(spec.at("gadget").get<std::string>()),
                spec.at("d").get<int>()));
        }
        if (spec.is_object() && spec.contains("circuit"))
            return relulab::circuit_bit_oracle(
                relulab::load_circuit(spec.at("circuit").get<std::string>()));
        return relulab::network_bit_oracle(
            relulab::load_network(spec.get<std::string>()));
    };
    return relulab::exhaustive_equivalence(label, bit_operand(p.at("a")),
                                           bit_operand(p.at("b")), d);
}

relulab::ExperimentReport run_l2(const json& p, std::uint64_t seed) {
    const std::string method = p.at("method").get<std::string>();
    relulab::ExperimentReport rep;
    rep.name = "l2_error";
    rep.params = p;
    rep.params["seed"] = seed;
    rep.pass = true;  // a measurement, not a verdict
    if (method == "exact_boolean") {
        const Rational sq = relulab::l2_squared_boolean(
            rational_operand(p.at("a").get<std::string>()),
            rational_operand(p.at("b").get<std::string>()),
            p.at("bits").get<int>());
        rep.summary = {{"l2_squared", sq.to_string()},
                       {"l2", std::sqrt(sq.to_double())}};
    } else if (method == "exact_univariate") {
        const Rational sq = relulab::l2_squared_univariate(
            relulab::load_network(p.at("a").get<std::string>()),
            relulab::load_network(p.at("b").get<std::string>()));
        rep.summary = {{"l2_squared", sq.to_string()},
                       {"l2", std::sqrt(sq.to_double())}};
    } else if (method == "corner_lifts") {
        const relulab::LiftVariant v =
            parse_variant(p.value("variant", std::string("quarter-height")));
        const Rational sq = relulab::l2_squared_corner_lifts(
            relulab::LiftedFunction::from_table(
                v, table_from_string(p.at("psi").get<std::string>())),
            relulab::LiftedFunction::from_table(
                v, table_from_string(p.at("psi_prime").get<std::string>())));
        rep.summary = {{"l2_squared", sq.to_string()},
                       {"l2", std::sqrt(sq.to_double())}};
    } else if (method == "monte_carlo") {
        const relulab::DoubleView a(relulab::load_network(p.at("a").get<std::string>()));
        const relulab::DoubleView b(relulab::load_network(p.at("b").get<std::string>()));
        const int dim = p.at("dim").get<int>();
        const relulab::McEstimate e = relulab::l2_squared_monte_carlo(
            [&](const std::vector<double>& x) { return a.evaluate(x)[0]; },
            [&](const std::vector<double>& x) { return b.evaluate(x)[0]; }, dim,
            parse_mu(p.value("mu", std::string("cube"))),
            p.value("samples", 100000L), seed);
        rep.summary = {{"l2_squared", e.mean},
                       {"l2", std::sqrt(std::max(0.0, e.mean))},
                       {"std_error", e.std_error},
                       {"samples", e.samples}};
    } else {
        throw std::runtime_error("unknown l2 method: " + method);
    }
    return rep;
}

relulab::ExperimentReport run_extractor(const json& p, std::uint64_t seed) {
    relulab::ExtractorConfig cfg;
    cfg.c = p.at("c").get<unsigned>();
    if (p.contains("delta"))
        cfg.delta = Rational::from_string(p.at("delta").get<std::string>());
    cfg.d = p.value("d", 1);
    cfg.deep = p.value("deep", false);
    return relulab::extractor_failure_rate(
        cfg, parse_mu(p.value("mu", std::string("cube"))), p.value("samples", 100000L),
        p.value("threshold", 0.01), seed);
}

relulab::ExperimentReport run_cost(const json& p, std::uint64_t seed) {
    relulab::CostSweepConfig cfg;
    const std::string model = p.value("model", std::string("randomized"));
    cfg.model = model == "real" ? relulab::CostSweepConfig::Model::Real
                                : relulab::CostSweepConfig::Model::Randomized;
    const std::string family = p.value("family", std::string("disj"));
    cfg.family = family == "ip" ? relulab::CostSweepConfig::Family::Ip
                                : relulab::CostSweepConfig::Family::Disj;
    if (p.contains("dims")) cfg.dims = p.at("dims").get<std::vector<int>>();
    cfg.partitions_per_dim = p.value("partitions_per_dim", cfg.partitions_per_dim);
    cfg.inputs_per_partition = p.value("inputs_per_partition", cfg.inputs_per_partition);
    if (p.contains("eps_per_neuron"))
        cfg.eps_per_neuron = Rational::from_string(p.at("eps_per_neuron").get<std::string>());
    return relulab::cost_sweep(cfg, seed);
}

relulab::ExperimentReport run_pipeline(const json& p, std::uint64_t seed) {
    relulab::PipelineConfig cfg;
    cfg.d = p.value("d", 1);
    cfg.c = p.value("c", 4u);
    if (p.contains("delta"))
        cfg.delta = Rational::from_string(p.at("delta").get<std::string>());
    cfg.mu = parse_mu(p.value("mu", std::string("cube")));
    cfg.mc_samples = p.value("mc_samples", 100000L);

    const std::string f = p.value("f", std::string("identity"));
    const std::string cprefix = "constant:";
    auto affine1 = [](const Rational& w, const Rational& b) {
        return relulab::Network(
            1, {relulab::Layer{{{w}}, {b}, std::nullopt}});
    };
    if (f == "identity") {
        cfg.f = [](const std::vector<Rational>& x) { return x[0]; };
        cfg.lipschitz_bound = Rational(1);
        if (cfg.d == 1) cfg.f_net = affine1(Rational(1), Rational(0));
    } else if (f == "mean") {
        cfg.f = [](const std::vector<Rational>& x) {
            Rational s(0);
            for (const auto& v : x) s += v;
            return s / Rational(static_cast<long>(x.size()));
        };
        cfg.lipschitz_bound = Rational(1);
        if (cfg.d == 1) cfg.f_net = affine1(Rational(1), Rational(0));
    } else if (f.rfind(cprefix, 0) == 0) {
        const Rational v = Rational::from_string(f.substr(cprefix.size()));
        cfg.f = [v](const std::vector<Rational>&) { return v; };
        cfg.lipschitz_bound = Rational(0);
        if (cfg.d == 1) cfg.f_net = affine1(Rational(0), v);
    } else {
        throw std::runtime_error("unknown pipeline oracle: " + f);
    }
    if (p.contains("lipschitz"))
        cfg.lipschitz_bound = Rational::from_string(p.at("lipschitz").get<std::string>());
    return relulab::pipeline_check(cfg, seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit ReLU-network / threshold-circuit constructions "
                 "and their communication protocols"};
    app.require_subcommand(1);

    int exit_code = 0;

    // ---- gadget emitters -------------------------------------------------
    auto* gadget = app.add_subcommand("gadget", "emit a construction as network JSON");
    gadget->require_subcommand(1);
    {
        auto* sc = gadget->add_subcommand("sawtooth", "iterated triangle map");
        auto j = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        sc->add_option("--j", *j, "composition count")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(relulab::sawtooth(*j),
                                          prov("sawtooth-composition", {{"j", *j}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("extractor", "fixed-point bit extractor");
        auto c = std::make_shared<unsigned>(4);
        auto delta = std::make_shared<std::string>();
        auto d = std::make_shared<int>(1);
        auto deep = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        sc->add_option("--c", *c, "bits per coordinate")->required();
        sc->add_option("--delta", *delta, "strip width p/q (default 2^-c-3)");
        sc->add_option("--dim", *d, "coordinates");
        sc->add_flag("--deep", *deep, "use the iterated-map variant");
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            const Rational dl = delta->empty() ? relulab::default_delta(*c)
                                               : Rational::from_string(*delta);
            relulab::Network net =
                *deep ? relulab::juxtapose(std::vector<relulab::Network>(
                            *d, relulab::bit_extractor_deep(*c, dl)))
                      : relulab::bit_extractor_shallow(*c, dl, *d);
            emit(relulab::network_to_json(
                     net, prov(*deep ? "bit-extractor-deep" : "bit-extractor-shallow",
                               {{"c", *c}, {"delta", dl.to_string()}, {"dim", *d}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("bool", "Boolean-function gadget");
        auto kind = std::make_shared<std::string>();
        auto d = std::make_shared<int>(2);
        auto out = std::make_shared<std::string>();
        sc->add_option("--kind", *kind, "and|nor|parity|disj|ip")->required();
        sc->add_option("--d", *d, "arity (pair count for disj/ip)")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(
                     relulab::boolean_gadget(parse_gadget_kind(*kind), *d),
                     prov(*kind + "-gadget", {{"d", *d}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("decoder", "bits-to-value readout");
        auto c = std::make_shared<unsigned>(4);
        auto out = std::make_shared<std::string>();
        sc->add_option("--c", *c, "bit count")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(relulab::binary_decoder(*c),
                                          prov("binary-decoder", {{"c", *c}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("rounding", "corner-cube rounding layer");
        auto d = std::make_shared<int>(1);
        auto out = std::make_shared<std::string>();
        sc->add_option("--d", *d, "coordinates")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(relulab::rounding_layer(*d),
                                          prov("rounding-layer", {{"d", *d}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("threshold-output",
                                          "snap a scalar output to {0,1}");
        auto net_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sc->add_option("--net", *net_path, "network JSON")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(
                     relulab::threshold_output(relulab::load_network(*net_path)),
                     prov("threshold-output", {{"net", *net_path}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand("agreement",
                                          "compose with the rounding layer");
        auto net_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sc->add_option("--net", *net_path, "network JSON for g")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            emit(relulab::network_to_json(
                     relulab::agreement_network(relulab::load_network(*net_path)),
                     prov("agreement-network", {{"net", *net_path}})),
                 *out);
        });
    }
    {
        auto* sc = gadget->add_subcommand(
            "approximator", "decoder . compiled circuit . extractor");
        auto circuit_path = std::make_shared<std::string>();
        auto c = std::make_shared<unsigned>(4);
        auto d = std::make_shared<int>(1);
        auto delta = std::make_shared<std::string>();
        auto deep = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>();
        sc->add_option("--circuit", *circuit_path, "threshold circuit JSON")->required();
        sc->add_option("--c", *c, "bits per coordinate")->required();
        sc->add_option("--d", *d, "coordinates")->required();
        sc->add_option("--delta", *delta, "strip width p/q (default 2^-c-3)");
        sc->add_flag("--deep", *deep, "use the iterated-map extractor");
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            const Rational dl = delta->empty() ? relulab::default_delta(*c)
                                               : Rational::from_string(*delta);
            emit(relulab::network_to_json(
                     relulab::benign_approximator(relulab::load_circuit(*circuit_path),
                                                  *c, *d, dl, *deep),
                     prov("benign-approximator",
                          {{"circuit", *circuit_path},
                           {"c", *c},
                           {"d", *d},
                           {"delta", dl.to_string()},
                           {"deep", *deep}})),
                 *out);
        });
    }

    // ---- circuit synthesis and compilation --------------------------------
    {
        auto* sc = app.add_subcommand("synth", "truth table(s) -> threshold circuit");
        auto table = std::make_shared<std::vector<std::string>>();
        auto out = std::make_shared<std::string>();
        sc->add_option("--table", *table, "0/1 string, LSB-first index; repeatable")
            ->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            std::vector<std::vector<int>> tables;
            for (const auto& t : *table) tables.push_back(table_from_string(t));
            emit(relulab::circuit_to_json(relulab::truth_tables_to_circuit(tables)),
                 *out);
        });
    }
    {
        auto* sc = app.add_subcommand("compile", "threshold circuit -> ReLU network");
        auto circuit_path = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sc->add_option("--circuit", *circuit_path, "threshold circuit JSON")->required();
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            const relulab::ThresholdCircuit tc = relulab::load_circuit(*circuit_path);
            emit(relulab::network_to_json(relulab::compile_to_relu(tc),
                                          relulab::compile_provenance(tc)),
                 *out);
        });
    }

    // ---- evaluation --------------------------------------------------------
    {
        auto* sc = app.add_subcommand("eval", "evaluate a network or circuit");
        auto net_path = std::make_shared<std::string>();
        auto circuit_path = std::make_shared<std::string>();
        auto point = std::make_shared<std::string>();
        auto bits = std::make_shared<std::string>();
        auto* on = sc->add_option("--net", *net_path, "network JSON");
        auto* oc = sc->add_option("--circuit", *circuit_path, "circuit JSON");
        on->excludes(oc);
        auto* op = sc->add_option("--point", *point, "comma-separated rationals");
        auto* ob = sc->add_option("--bits", *bits, "0/1 input string");
        op->excludes(ob);
        sc->callback([=] {
            json result;
            if (!net_path->empty()) {
                const relulab::Network net = relulab::load_network(*net_path);
                const std::vector<Rational> y =
                    point->empty() ? net.evaluate_bits(parse_bits(*bits))
                                   : net.evaluate(parse_point(*point));
                json outs = json::array();
                for (const auto& v : y) outs.push_back(v.to_string());
                result["outputs"] = std::move(outs);
            } else if (!circuit_path->empty()) {
                const relulab::ThresholdCircuit tc = relulab::load_circuit(*circuit_path);
                result["outputs"] = tc.evaluate(parse_bits(*bits));
            } else {
                throw CLI::ValidationError("eval", "need --net or --circuit");
            }
            emit(result, "");
        });
    }

    // ---- protocol ----------------------------------------------------------
    auto* protocol = app.add_subcommand("protocol", "two-party evaluation");
    protocol->require_subcommand(1);
    {
        auto* sc = protocol->add_subcommand("run", "one protocol execution");
        auto model = std::make_shared<std::string>("randomized");
        auto net_path = std::make_shared<std::string>();
        auto circuit_path = std::make_shared<std::string>();
        auto partition = std::make_shared<std::string>("half");
        auto input = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(1);
        auto eps_total = std::make_shared<std::string>("1/10");
        auto eps_pn = std::make_shared<std::string>();
        auto out = std::make_shared<std::string>();
        sc->add_option("--model", *model, "randomized|real");
        auto* on = sc->add_option("--net", *net_path, "network JSON");
        auto* oc = sc->add_option("--circuit", *circuit_path, "circuit JSON (real model)");
        on->excludes(oc);
        sc->add_option("--partition", *partition, "half|alt|i,j,k (Alice's coords)");
        sc->add_option("--input", *input, "0/1 input string")->required();
        sc->add_option("--seed", *seed, "shared-randomness seed");
        sc->add_option("--eps-total", *eps_total, "total error budget p/q");
        sc->add_option("--eps-per-neuron", *eps_pn, "per-comparison budget p/q");
        sc->add_option("--out", *out, "output file (default stdout)");
        sc->callback([=] {
            const std::vector<int> x = parse_bits(*input);
            const int dim = static_cast<int>(x.size());
            const relulab::Partition p = parse_partition(*partition, dim);
            relulab::ProtocolResult r;
            if (*model == "real") {
                if (!circuit_path->empty())
                    r = relulab::eval_network_real(relulab::load_circuit(*circuit_path),
                                                   p, x);
                else
                    r = relulab::eval_network_real(relulab::load_network(*net_path), p, x);
            } else if (*model == "randomized") {
                if (net_path->empty())
                    throw CLI::ValidationError(
                        "protocol run", "randomized model runs networks; compile first");
                const relulab::Network net = relulab::load_network(*net_path);
                const Rational pn =
                    eps_pn->empty()
                        ? relulab::per_neuron_budget(net, Rational::from_string(*eps_total))
                        : Rational::from_string(*eps_pn);
                relulab::SharedRandomness rnd(*seed);
                r = relulab::eval_network_randomized(net, p, x, pn, rnd);
            } else {
                throw CLI::ValidationError("protocol run", "model must be randomized|real");
            }
            emit(relulab::transcript_to_json(r.transcript, r.bit), *out);
        });
    }
    {
        auto* sc = protocol->add_subcommand("sweep", "cost table over gadget dimensions");
        auto model = std::make_shared<std::string>("randomized");
        auto family = std::make_shared<std::string>("disj");
        auto dims = std::make_shared<std::vector<int>>(std::vector<int>{8, 16, 32, 64});
        auto partitions = std::make_shared<int>(20);
        auto inputs = std::make_shared<int>(5);
        auto eps = std::make_shared<std::string>("1/1000");
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        auto json_out = std::make_shared<std::string>();
        sc->add_option("--model", *model, "randomized|real");
        sc->add_option("--family", *family, "disj|ip");
        sc->add_option("--dims", *dims, "gadget dimensions")->delimiter(',');
        sc->add_option("--partitions", *partitions, "random partitions per dimension");
        sc->add_option("--inputs", *inputs, "random inputs per partition");
        sc->add_option("--eps", *eps, "per-comparison budget p/q");
        sc->add_option("--seed", *seed, "sweep seed");
        sc->add_option("--out", *out, "CSV output file (default stdout)");
        sc->add_option("--json", *json_out, "also write the full report here");
        sc->callback([=, &exit_code] {
            relulab::CostSweepConfig cfg;
            cfg.model = *model == "real" ? relulab::CostSweepConfig::Model::Real
                                         : relulab::CostSweepConfig::Model::Randomized;
            cfg.family = *family == "ip" ? relulab::CostSweepConfig::Family::Ip
                                         : relulab::CostSweepConfig::Family::Disj;
            cfg.dims = *dims;
            cfg.partitions_per_dim = *partitions;
            cfg.inputs_per_partition = *inputs;
            cfg.eps_per_neuron = Rational::from_string(*eps);
            const relulab::ExperimentReport rep = relulab::cost_sweep(cfg, *seed);
            emit_text(relulab::cost_table_csv(rep), *out);
            if (!json_out->empty()) emit(rep.to_json(), *json_out);
            if (!rep.pass) exit_code = 1;
        });
    }

    // ---- lab ----------------------------------------------------------------
    {
        auto* sc = app.add_subcommand("lab", "run an experiment from a params file");
        auto experiment = std::make_shared<std::string>();
        auto params_path = std::make_shared<std::string>();
        auto seed = std::make_shared<std::uint64_t>(1);
        auto out = std::make_shared<std::string>();
        auto csv = std::make_shared<std::string>();
        sc->add_option("experiment", *experiment,
                       "equivalence|l2|packing|extractor|cost|pipeline")
            ->required();
        sc->add_option("--params", *params_path, "JSON parameter file")->required();
        sc->add_option("--seed", *seed, "experiment seed");
        sc->add_option("--out", *out, "report file (default stdout)");
        sc->add_option("--csv", *csv, "cost table CSV (cost experiment only)");
        sc->callback([=, &exit_code] {
            const json p = read_json_file(*params_path);
            relulab::ExperimentReport rep;
            if (*experiment == "equivalence") {
                rep = run_equivalence(p);
            } else if (*experiment == "l2") {
                rep = run_l2(p, *seed);
            } else if (*experiment == "packing") {
                rep = relulab::packing_distance_check(
                    p.at("d").get<int>(),
                    table_from_string(p.at("psi").get<std::string>()),
                    table_from_string(p.at("psi_prime").get<std::string>()));
            } else if (*experiment == "extractor") {
                rep = run_extractor(p, *seed);
            } else if (*experiment == "cost") {
                rep = run_cost(p, *seed);
                if (!csv->empty()) emit_text(relulab::cost_table_csv(rep), *csv);
            } else if (*experiment == "pipeline") {
                rep = run_pipeline(p, *seed);
            } else {
                throw CLI::ValidationError("lab", "unknown experiment: " + *experiment);
            }
            emit(rep.to_json(), *out);
            if (!rep.pass) exit_code = 1;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
