#pragma once

#include <string>

#include "dagsched/nn.hpp"

namespace dagsched {

// Network sizes. Feature width is fixed at 2 (normalized runtime, resource).
struct ModelConfig {
  int embed_dim = 64;     // node/graph embedding width
  int gnn_layers = 2;     // dense layers producing the initial embedding
  int hops = 3;           // message-passing iterations available
  int policy_hidden = 64; // width of both policy networks
  int policy_blocks = 2;  // residual blocks per policy network

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline constexpr int kNodeFeatures = 2;

// All trainable state: the graph encoder (gnn.*), the starting-node policy
// (p1.*) and the ending-node policy (p2.*).
struct Model {
  ModelConfig cfg;
  ParamStore params;
};

// Fresh model with seeded uniform init.
Model make_model(const ModelConfig& cfg, std::uint64_t seed);

// Versioned JSON checkpoint; values round-trip bit-exactly.
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);
void save_model(const Model& m, const std::string& path);
Model load_model(const std::string& path);

}  // namespace dagsched
