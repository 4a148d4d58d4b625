#pragma once

#include "dagsched/policy.hpp"
#include "dagsched/schedule.hpp"

namespace dagsched {

// Adds up to m edges. Per edge: embed, take the beam_width most probable
// starting nodes, pair each with its single most probable ending node, and
// commit the pair with the largest joint probability (ties toward lower start
// id, then lower end id). Stops early when no legal action remains.
DagGraph infer_edges(const DagGraph& g, int m, int beam_width, Model& model,
                     int hops);

struct EnsembleResult {
  DagGraph graph;
  double makespan = 0.0;
  int edges_used = 0;  // which m in 0..m_max won
};

// Evaluates infer_edges for m = 0..m_max and keeps the variant with minimal
// makespan under the rule; m = 0 is always included, so the result never
// exceeds the plain heuristic.
EnsembleResult ensemble_best(const DagGraph& g, const PriorityRule& rule, int m_max,
                             int beam_width, Model& model, int hops);

}  // namespace dagsched
