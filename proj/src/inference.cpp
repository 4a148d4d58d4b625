#include "dagsched/inference.hpp"

#include <algorithm>

namespace dagsched {

namespace {

struct Candidate {
  EdgeAction action;
  double joint_prob = 0.0;
};

// One beam step; returns false when the graph admits no legal action.
bool pick_edge(const DagGraph& g, int beam_width, Model& model, int hops,
               Candidate& out) {
  Tape tape;
  Embeddings ems = embed(tape, g, model, hops);
  ActionDistribution d1;
  try {
    d1 = start_node_distribution(tape, g, ems, model);
  } catch (const NoActionError&) {
    return false;
  }

  // Top beam_width starting nodes by probability (ties toward lower id).
  std::vector<std::size_t> idx(d1.candidate_ids.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (d1.probs[a] != d1.probs[b]) return d1.probs[a] > d1.probs[b];
    return d1.candidate_ids[a] < d1.candidate_ids[b];
  });
  if (int(idx.size()) > beam_width) idx.resize(std::size_t(beam_width));

  bool found = false;
  for (std::size_t i : idx) {
    const int start = d1.candidate_ids[i];
    ActionDistribution d2 = end_node_distribution(tape, g, ems, model, start);
    int best_end = -1;
    double best_p2 = -1.0;
    for (std::size_t k = 0; k < d2.candidate_ids.size(); ++k)
      if (d2.probs[k] > best_p2) {
        best_p2 = d2.probs[k];
        best_end = d2.candidate_ids[k];
      }
    const double joint = d1.probs[i] * best_p2;
    const EdgeAction action{start, best_end};
    if (!found || joint > out.joint_prob ||
        (joint == out.joint_prob && (action.start < out.action.start ||
                                     (action.start == out.action.start &&
                                      action.end < out.action.end)))) {
      out = Candidate{action, joint};
      found = true;
    }
  }
  return found;
}

}  // namespace

DagGraph infer_edges(const DagGraph& g, int m, int beam_width, Model& model,
                     int hops) {
  if (beam_width < 1) throw std::invalid_argument("infer_edges: beam width must be >= 1");
  if (m < 0) throw std::invalid_argument("infer_edges: edge count must be >= 0");
  DagGraph out = g;
  for (int step = 0; step < m; ++step) {
    Candidate c;
    if (!pick_edge(out, beam_width, model, hops, c)) break;
    out = add_edge(out, c.action);
  }
  return out;
}

EnsembleResult ensemble_best(const DagGraph& g, const PriorityRule& rule, int m_max,
                             int beam_width, Model& model, int hops) {
  if (m_max < 0) throw std::invalid_argument("ensemble_best: m_max must be >= 0");
  // The beam is greedy per edge, so the m-edge graph is a prefix of the
  // (m+1)-edge run; walk once and score every prefix.
  EnsembleResult best;
  best.graph = g;
  best.makespan = makespan(g, rule);
  best.edges_used = 0;

  DagGraph current = g;
  for (int m = 1; m <= m_max; ++m) {
    Candidate c;
    if (!pick_edge(current, beam_width, model, hops, c)) break;
    current = add_edge(current, c.action);
    const double ms = makespan(current, rule);
    if (ms < best.makespan) {
      best.graph = current;
      best.makespan = ms;
      best.edges_used = m;
    }
  }
  return best;
}

}  // namespace dagsched
