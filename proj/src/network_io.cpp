#include "relulab/network_io.hpp"

#include <fstream>
#include <stdexcept>

namespace relulab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json rationals_to_json(const std::vector<Rational>& xs) {
    ordered_json a = ordered_json::array();
    for (const auto& x : xs) a.push_back(x.to_string());
    return a;
}

std::vector<Rational> rationals_from_json(const json& a) {
    if (!a.is_array()) throw std::invalid_argument("network json: expected array of rationals");
    std::vector<Rational> xs;
    xs.reserve(a.size());
    for (const auto& v : a) {
        if (v.is_string())
            xs.push_back(Rational::from_string(v.get<std::string>()));
        else if (v.is_number_integer())
            xs.push_back(Rational(v.get<long>()));
        else
            throw std::invalid_argument("network json: rational must be \"p/q\" string");
    }
    return xs;
}

}  // namespace

ordered_json network_to_json(const Network& net, const ordered_json& provenance) {
    ordered_json j;
    j["input_dim"] = net.input_dim();
    ordered_json layers = ordered_json::array();
    for (const Layer& L : net.layers()) {
        ordered_json lj;
        ordered_json w = ordered_json::array();
        for (const auto& row : L.weights) w.push_back(rationals_to_json(row));
        lj["weights"] = std::move(w);
        lj["bias"] = rationals_to_json(L.bias);
        if (!L.activation) {
            lj["activation"] = nullptr;
        } else if (L.activation->kind == ActKind::Relu) {
            lj["activation"] = ordered_json{{"kind", "relu"}};
        } else if (L.activation->kind == ActKind::Sign) {
            lj["activation"] = ordered_json{{"kind", "sign"}};
        } else {
            ordered_json aj;
            aj["kind"] = "pwl";
            aj["breakpoints"] = rationals_to_json(L.activation->breakpoints);
            aj["slopes"] = rationals_to_json(L.activation->slopes);
            aj["intercepts"] = rationals_to_json(L.activation->intercepts);
            lj["activation"] = std::move(aj);
        }
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    if (!provenance.is_null()) j["provenance"] = provenance;
    return j;
}

Network network_from_json(const json& j) {
    if (!j.contains("input_dim") || !j.contains("layers"))
        throw std::invalid_argument("network json: missing input_dim/layers");
    int input_dim = j.at("input_dim").get<int>();
    std::vector<Layer> layers;
    for (const auto& lj : j.at("layers")) {
        Layer L;
        for (const auto& row : lj.at("weights")) L.weights.push_back(rationals_from_json(row));
        L.bias = rationals_from_json(lj.at("bias"));
        const auto& aj = lj.at("activation");
        if (aj.is_null()) {
            L.activation = std::nullopt;
        } else {
            std::string kind = aj.at("kind").get<std::string>();
            if (kind == "relu") {
                L.activation = Activation::relu();
            } else if (kind == "sign") {
                L.activation = Activation::sign();
            } else if (kind == "pwl") {
                L.activation = Activation::pwl(rationals_from_json(aj.at("breakpoints")),
                                               rationals_from_json(aj.at("slopes")),
                                               rationals_from_json(aj.at("intercepts")));
            } else {
                throw std::invalid_argument("network json: unknown activation kind '" + kind + "'");
            }
        }
        layers.push_back(std::move(L));
    }
    return Network(input_dim, std::move(layers));
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    json j;
    in >> j;
    return network_from_json(j);
}

void save_network(const Network& net, const std::string& path, const ordered_json& provenance) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write network file: " + path);
    out << network_to_json(net, provenance).dump(2) << "\n";
}

}  // namespace relulab
