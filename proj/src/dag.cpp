#include "dagsched/dag.hpp"

#include <algorithm>
#include <queue>

#include "dagsched/kernels.hpp"

namespace dagsched {

DagGraph::DagGraph(std::vector<JobNode> nodes, std::vector<std::pair<int, int>> edges,
                   std::optional<int> virtual_root)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), virtual_root_(virtual_root) {
  const int n = int(nodes_.size());
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].id != i)
      throw std::invalid_argument("node ids must be dense 0-based, got id " +
                                  std::to_string(nodes_[i].id) + " at position " +
                                  std::to_string(i));
    if (nodes_[i].runtime < 0.0)
      throw std::invalid_argument("negative runtime at node " + std::to_string(i));
    if (nodes_[i].resource < 0.0 || nodes_[i].resource > 1.0)
      throw std::invalid_argument("resource outside [0,1] at node " + std::to_string(i));
  }
  if (virtual_root_) {
    check_node(*virtual_root_);
    const JobNode& r = nodes_[*virtual_root_];
    if (r.runtime != 0.0 || r.resource != 0.0)
      throw std::invalid_argument("virtual root must have runtime 0 and resource 0");
  }

  children_.assign(n, {});
  parents_.assign(n, {});
  reach_ = BitMatrix(n);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    check_node(u);
    check_node(v);
    if (u == v) throw std::invalid_argument("self-edge at node " + std::to_string(u));
    children_[u].push_back(v);
    parents_[v].push_back(u);
  }
  if (virtual_root_ && !parents_[*virtual_root_].empty())
    throw std::invalid_argument("virtual root must have no incoming edges");

  // Kahn's algorithm both validates acyclicity and yields a processing order
  // for the closure: walking nodes in reverse topological order, each node's
  // row is the OR of its children's rows plus the child bits themselves.
  std::vector<int> order = topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    for (int c : children_[u]) {
      reach_.set(u, c);
      kernels::orw(reach_.row(u), reach_.row(c), reach_.words_per_row());
    }
  }
}

void DagGraph::check_node(int id) const {
  if (id < 0 || id >= node_count())
    throw std::invalid_argument("unknown node id " + std::to_string(id));
}

bool DagGraph::reaches(int u, int v) const {
  check_node(u);
  check_node(v);
  return reach_.get(u, v);
}

std::vector<int> DagGraph::roots() const {
  std::vector<int> out;
  for (int i = 0; i < node_count(); ++i)
    if (parents_[i].empty()) out.push_back(i);
  return out;
}

std::vector<int> DagGraph::topological_order() const {
  const int n = node_count();
  std::vector<int> indeg(n, 0);
  for (auto& [u, v] : edges_) indeg[v]++;
  std::vector<int> order;
  order.reserve(n);
  std::queue<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push(i);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    order.push_back(u);
    for (int c : children_[u])
      if (--indeg[c] == 0) q.push(c);
  }
  if (int(order.size()) != n) throw std::invalid_argument("graph contains a cycle");
  return order;
}

DagGraph merge_dags(const std::vector<DagGraph>& dags) {
  if (dags.empty()) throw std::invalid_argument("merge_dags: empty input list");
  std::vector<JobNode> nodes;
  std::vector<std::pair<int, int>> edges;
  std::size_t total = 1;
  for (const auto& d : dags) total += d.nodes().size();
  nodes.reserve(total);
  nodes.push_back(JobNode{0, 0.0, 0.0});  // virtual root at index 0

  int offset = 1;
  for (const auto& d : dags) {
    for (const JobNode& jn : d.nodes())
      nodes.push_back(JobNode{jn.id + offset, jn.runtime, jn.resource});
    for (auto [u, v] : d.edges()) edges.emplace_back(u + offset, v + offset);
    for (int r : d.roots()) edges.emplace_back(0, r + offset);
    offset += d.node_count();
  }
  return DagGraph(std::move(nodes), std::move(edges), 0);
}

bool is_conflicting(const DagGraph& g, const EdgeAction& a) {
  if (a.start < 0 || a.start >= g.node_count() || a.end < 0 || a.end >= g.node_count())
    throw std::invalid_argument("is_conflicting: unknown node id");
  if (a.start == a.end) return true;
  if (g.is_virtual_root(a.start) || g.is_virtual_root(a.end)) return true;
  return g.reaches(a.start, a.end) || g.reaches(a.end, a.start);
}

DagGraph add_edge(const DagGraph& g, const EdgeAction& a) {
  if (is_conflicting(g, a))
    throw ConflictError("add_edge: conflicting edge (" + std::to_string(a.start) +
                        ", " + std::to_string(a.end) + ")");
  DagGraph out = g;
  out.edges_.emplace_back(a.start, a.end);
  std::sort(out.edges_.begin(), out.edges_.end());
  out.children_[a.start].push_back(a.end);
  out.parents_[a.end].push_back(a.start);

  // Closure update: everything that reached start now also reaches end and
  // everything end reaches.
  BitMatrix& r = out.reach_;
  r.set(a.start, a.end);
  kernels::orw(r.row(a.start), r.row(a.end), r.words_per_row());
  for (int u = 0; u < out.node_count(); ++u) {
    if (u != a.start && r.get(u, a.start)) {
      r.set(u, a.end);
      kernels::orw(r.row(u), r.row(a.end), r.words_per_row());
    }
  }
  return out;
}

std::vector<int> qualified_starting_nodes(const DagGraph& g) {
  std::vector<int> out;
  const int n = g.node_count();
  for (int u = 0; u < n; ++u) {
    if (g.is_virtual_root(u)) continue;
    for (int v = 0; v < n; ++v) {
      if (v == u || g.is_virtual_root(v)) continue;
      if (!g.reaches(u, v) && !g.reaches(v, u)) {
        out.push_back(u);
        break;
      }
    }
  }
  return out;
}

std::vector<int> qualified_ending_nodes(const DagGraph& g, int start) {
  if (start < 0 || start >= g.node_count())
    throw std::invalid_argument("qualified_ending_nodes: unknown node id");
  std::vector<int> out;
  for (int v = 0; v < g.node_count(); ++v) {
    if (v == start || g.is_virtual_root(v) || g.is_virtual_root(start)) continue;
    if (!g.reaches(start, v) && !g.reaches(v, start)) out.push_back(v);
  }
  return out;
}

}  // namespace dagsched
