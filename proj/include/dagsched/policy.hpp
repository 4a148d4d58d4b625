#pragma once

#include "dagsched/gnn.hpp"

namespace dagsched {

// Probabilities over qualified candidate nodes. Every node except the virtual
// root is scored (one network pass over O(n) rows); non-qualified nodes are
// masked to probability zero, and only the qualified support is listed here.
struct ActionDistribution {
  std::vector<int> candidate_ids;  // qualified nodes, ascending id
  std::vector<double> probs;       // matching probabilities, sum 1
  int scored_rows = 0;             // rows pushed through the policy network

  double prob_of(int id) const;
};

// p(a1 | G): scores concat(graph_em, node_em) per node through the starting
// policy network. Starting nodes with no qualified ending are masked out.
// Throws NoActionError when no node qualifies.
ActionDistribution start_node_distribution(Tape& tape, const DagGraph& g,
                                           const Embeddings& ems, Model& m);

// p(a2 | G, a1): scores concat(graph_em, node_em(start), node_em) per node.
ActionDistribution end_node_distribution(Tape& tape, const DagGraph& g,
                                         const Embeddings& ems, Model& m, int start);

// log p(a1|G) + log p(a2|G,a1) as a live tape scalar; throws
// std::invalid_argument if the action is outside the legal support.
Tape::Ref joint_log_prob(Tape& tape, const DagGraph& g, const Embeddings& ems,
                         Model& m, const EdgeAction& a);

}  // namespace dagsched
