#include "dagsched/policy.hpp"

#include <algorithm>

namespace dagsched {

namespace {

Tape::Ref run_policy_net(Tape& t, Model& m, const std::string& prefix, Tape::Ref x) {
  auto P = [&](const std::string& suffix) -> Tape::Ref {
    return t.param(m.params.get(prefix + suffix));
  };
  Tape::Ref h = t.dense(x, P(".proj.W"), P(".proj.b"), Activation::Relu);
  for (int k = 0; k < m.cfg.policy_blocks; ++k) {
    const std::string rb = ".res" + std::to_string(k);
    h = residual_block(t, h, P(rb + ".f1.W"), P(rb + ".f1.b"), P(rb + ".f2.W"),
                       P(rb + ".f2.b"));
  }
  return t.dense(h, P(".head.W"), P(".head.b"), Activation::Linear);
}

std::vector<std::uint8_t> start_mask(const DagGraph& g) {
  std::vector<std::uint8_t> allowed(g.node_count(), 0);
  for (int id : qualified_starting_nodes(g)) allowed[id] = 1;
  return allowed;
}

std::vector<std::uint8_t> end_mask(const DagGraph& g, int start) {
  std::vector<std::uint8_t> allowed(g.node_count(), 0);
  for (int id : qualified_ending_nodes(g, start)) allowed[id] = 1;
  return allowed;
}

Tape::Ref start_scores(Tape& t, const Embeddings& ems, Model& m) {
  Tape::Ref in = t.concat_cols({t.repeat_row(ems.graph_em, ems.n), ems.node_ems});
  return run_policy_net(t, m, "p1", in);
}

Tape::Ref end_scores(Tape& t, const Embeddings& ems, Model& m, int start) {
  Tape::Ref start_em = t.gather_rows(ems.node_ems, {start});
  Tape::Ref in = t.concat_cols({t.repeat_row(ems.graph_em, ems.n),
                                t.repeat_row(start_em, ems.n), ems.node_ems});
  return run_policy_net(t, m, "p2", in);
}

ActionDistribution make_distribution(Tape& t, Tape::Ref scores,
                                     const std::vector<std::uint8_t>& allowed) {
  const Tensor2& sv = t.value(scores);
  std::vector<double> probs =
      masked_softmax(std::span(sv.data(), sv.size()), std::span(allowed));
  ActionDistribution out;
  out.scored_rows = sv.rows();
  for (int i = 0; i < sv.rows(); ++i) {
    if (allowed[i]) {
      out.candidate_ids.push_back(i);
      out.probs.push_back(probs[i]);
    }
  }
  return out;
}

}  // namespace

double ActionDistribution::prob_of(int id) const {
  auto it = std::find(candidate_ids.begin(), candidate_ids.end(), id);
  if (it == candidate_ids.end()) return 0.0;
  return probs[std::size_t(it - candidate_ids.begin())];
}

ActionDistribution start_node_distribution(Tape& tape, const DagGraph& g,
                                           const Embeddings& ems, Model& m) {
  std::vector<std::uint8_t> allowed = start_mask(g);
  if (std::find(allowed.begin(), allowed.end(), 1) == allowed.end())
    throw NoActionError("no qualified starting nodes");
  return make_distribution(tape, start_scores(tape, ems, m), allowed);
}

ActionDistribution end_node_distribution(Tape& tape, const DagGraph& g,
                                         const Embeddings& ems, Model& m, int start) {
  std::vector<std::uint8_t> allowed = end_mask(g, start);
  if (std::find(allowed.begin(), allowed.end(), 1) == allowed.end())
    throw NoActionError("no qualified ending nodes for start " + std::to_string(start));
  return make_distribution(tape, end_scores(tape, ems, m, start), allowed);
}

Tape::Ref joint_log_prob(Tape& tape, const DagGraph& g, const Embeddings& ems,
                         Model& m, const EdgeAction& a) {
  std::vector<std::uint8_t> allowed1 = start_mask(g);
  if (a.start < 0 || a.start >= g.node_count() || !allowed1[a.start])
    throw std::invalid_argument("joint_log_prob: start node outside support");
  std::vector<std::uint8_t> allowed2 = end_mask(g, a.start);
  if (a.end < 0 || a.end >= g.node_count() || !allowed2[a.end])
    throw std::invalid_argument("joint_log_prob: end node outside support");

  Tape::Ref lp1 = tape.pick_log_softmax(start_scores(tape, ems, m),
                                        std::move(allowed1), a.start);
  Tape::Ref lp2 = tape.pick_log_softmax(end_scores(tape, ems, m, a.start),
                                        std::move(allowed2), a.end);
  return tape.add(lp1, lp2);
}

}  // namespace dagsched
