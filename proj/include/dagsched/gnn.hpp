#pragma once

#include "dagsched/dag.hpp"
#include "dagsched/model.hpp"
#include "dagsched/nn.hpp"

namespace dagsched {

// Per-node embeddings plus their column mean as the whole-graph embedding,
// held as live tape nodes so policy heads can extend the same graph.
struct Embeddings {
  Tape::Ref node_ems = -1;  // n x d
  Tape::Ref graph_em = -1;  // 1 x d
  int n = 0;
  int dim = 0;
};

// Row i = (runtime_i / max runtime, resource_i); zero runtimes give a zero
// first column, so a virtual root encodes as (0, 0).
Tensor2 encode_features(const DagGraph& g);

// Initial embedding from the dense feature transform, then `hops` rounds of
// message passing against edge direction: each node aggregates the summed
// embeddings of its children, concatenated with its own, through the per-hop
// dense layer. hops must not exceed the model's configured hop count.
Embeddings embed(Tape& tape, const DagGraph& g, Model& m, int hops);

inline Embeddings embed(Tape& tape, const DagGraph& g, Model& m) {
  return embed(tape, g, m, m.cfg.hops);
}

}  // namespace dagsched
