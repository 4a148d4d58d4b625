#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dagsched {

struct ConflictError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One task: duration in seconds and the fraction of the unit resource it
// occupies while running.
struct JobNode {
  int id = 0;
  double runtime = 0.0;
  double resource = 0.0;
};

// A directed precedence edge to be added: start must finish before end starts.
struct EdgeAction {
  int start = 0;
  int end = 0;
  friend bool operator==(const EdgeAction&, const EdgeAction&) = default;
};

// Dense bit-packed boolean matrix; row r holds the set of nodes reachable
// from r by a directed path of at least one edge.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n)
      : n_(n), words_per_row_((n + 63) / 64), bits_(std::size_t(n) * words_per_row_, 0) {}

  bool get(int r, int c) const {
    return (bits_[row_off(r) + c / 64] >> (c % 64)) & 1u;
  }
  void set(int r, int c) { bits_[row_off(r) + c / 64] |= std::uint64_t(1) << (c % 64); }

  std::uint64_t* row(int r) { return bits_.data() + row_off(r); }
  const std::uint64_t* row(int r) const { return bits_.data() + row_off(r); }
  std::size_t words_per_row() const { return words_per_row_; }
  int size() const { return n_; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t row_off(int r) const { return std::size_t(r) * words_per_row_; }

  int n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Immutable DAG of job nodes. Mutating operations return a new graph; the
// reachability index is maintained incrementally on edge insertion and is
// always consistent with the edge set.
class DagGraph {
 public:
  DagGraph() = default;

  // Builds from nodes and edges; validates ids, value ranges and acyclicity.
  DagGraph(std::vector<JobNode> nodes, std::vector<std::pair<int, int>> edges,
           std::optional<int> virtual_root = std::nullopt);

  int node_count() const { return int(nodes_.size()); }
  const std::vector<JobNode>& nodes() const { return nodes_; }
  const JobNode& node(int id) const { return nodes_.at(id); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& children(int id) const { return children_.at(id); }
  const std::vector<int>& parents(int id) const { return parents_.at(id); }
  std::optional<int> virtual_root() const { return virtual_root_; }
  bool is_virtual_root(int id) const { return virtual_root_ && *virtual_root_ == id; }

  // True iff a directed path of at least one edge leads from u to v.
  bool reaches(int u, int v) const;
  const BitMatrix& reachability() const { return reach_; }

  // Nodes with no incoming edges.
  std::vector<int> roots() const;

  // One valid topological order.
  std::vector<int> topological_order() const;

 private:
  friend DagGraph add_edge(const DagGraph&, const EdgeAction&);
  friend DagGraph merge_dags(const std::vector<DagGraph>&);

  void check_node(int id) const;

  std::vector<JobNode> nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> parents_;
  std::optional<int> virtual_root_;
  BitMatrix reach_;
};

// Joins the inputs under a fresh virtual root (runtime 0, resource 0, id 0)
// with an edge to every node that had in-degree 0. Node ids are reassigned
// densely in input order.
DagGraph merge_dags(const std::vector<DagGraph>& dags);

// True when the edge cannot be added: a directed path already joins the two
// endpoints (either direction), the endpoints coincide, or one of them is the
// virtual root.
bool is_conflicting(const DagGraph& g, const EdgeAction& a);

// Returns a copy of g with the edge added and the reachability index updated.
// Throws ConflictError when is_conflicting(g, a).
DagGraph add_edge(const DagGraph& g, const EdgeAction& a);

// Non-root nodes that admit at least one non-conflicting outgoing action.
std::vector<int> qualified_starting_nodes(const DagGraph& g);

// Non-root nodes v != start with is_conflicting(g, {start, v}) false.
std::vector<int> qualified_ending_nodes(const DagGraph& g, int start);

// JSON document I/O: {"nodes":[{"id","runtime","resource"}...],
// "edges":[[u,v]...], "virtual_root": id?}. Validates bounds and acyclicity.
DagGraph load_dag_json(const std::string& text);
DagGraph load_dag_file(const std::string& path);
std::string dag_to_json(const DagGraph& g);
void save_dag_file(const DagGraph& g, const std::string& path);

}  // namespace dagsched
