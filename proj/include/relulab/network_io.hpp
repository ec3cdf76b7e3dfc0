#pragma once

#include "relulab/network.hpp"

#include <json.hpp>

#include <string>

namespace relulab {

// Network <-> JSON. Every rational is a "p/q" string, so round-trips are
// bit-exact. Layout:
//   {"input_dim": d,
//    "layers": [{"weights": [["p/q", ...], ...],
//                "bias": ["p/q", ...],
//                "activation": {"kind": "relu"|"sign"} |
//                              {"kind": "pwl", "breakpoints": [...],
//                               "slopes": [...], "intercepts": [...]} |
//                              null}, ...]}
// An optional "provenance" object records which construction emitted the
// file; loaders ignore it.
nlohmann::ordered_json network_to_json(const Network& net,
                                       const nlohmann::ordered_json& provenance = nullptr);

Network network_from_json(const nlohmann::json& j);

Network load_network(const std::string& path);
void save_network(const Network& net, const std::string& path,
                  const nlohmann::ordered_json& provenance = nullptr);

}  // namespace relulab
