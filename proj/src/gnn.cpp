#include "dagsched/gnn.hpp"

namespace dagsched {

Tensor2 encode_features(const DagGraph& g) {
  const int n = g.node_count();
  Tensor2 f(n, kNodeFeatures);
  double max_rt = 0.0;
  for (const JobNode& jn : g.nodes()) max_rt = std::max(max_rt, jn.runtime);
  for (int i = 0; i < n; ++i) {
    f.at(i, 0) = max_rt > 0.0 ? g.node(i).runtime / max_rt : 0.0;
    f.at(i, 1) = g.node(i).resource;
  }
  return f;
}

Embeddings embed(Tape& tape, const DagGraph& g, Model& m, int hops) {
  if (hops < 0 || hops > m.cfg.hops)
    throw std::invalid_argument("embed: hop count exceeds configured parameters");
  const int n = g.node_count();
  if (n == 0) throw std::invalid_argument("embed: empty graph");

  Tape::Ref e = tape.input(encode_features(g));
  for (int l = 0; l < m.cfg.gnn_layers; ++l) {
    const std::string prefix = "gnn.in" + std::to_string(l);
    e = tape.dense(e, tape.param(m.params.get(prefix + ".W")),
                   tape.param(m.params.get(prefix + ".b")), Activation::Relu);
  }

  std::vector<std::vector<int>> child_groups(n);
  for (int i = 0; i < n; ++i) child_groups[i] = g.children(i);

  for (int h = 0; h < hops; ++h) {
    Tape::Ref agg = tape.group_rowsum(e, child_groups);
    Tape::Ref cat = tape.concat_cols({e, agg});
    const std::string prefix = "gnn.hop" + std::to_string(h);
    e = tape.dense(cat, tape.param(m.params.get(prefix + ".W")),
                   tape.param(m.params.get(prefix + ".b")), Activation::Relu);
  }

  Embeddings out;
  out.node_ems = e;
  out.graph_em = tape.mean_rows(e);
  out.n = n;
  out.dim = m.cfg.embed_dim;
  return out;
}

}  // namespace dagsched
