#include <doctest.h>

#include "dagsched/dag.hpp"
#include "dagsched/schedule.hpp"
#include "support/oracle.hpp"

using namespace dagsched;
using namespace dagsched::testing;

namespace {

DagGraph diamond() {
  // 0 -> {1,2} -> 3
  return DagGraph({{0, 1.0, 0.5}, {1, 2.0, 0.5}, {2, 3.0, 0.5}, {3, 1.0, 0.5}},
                  {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
}

}  // namespace

TEST_CASE("construction validates invariants") {
  CHECK_THROWS_AS(DagGraph({{0, -1.0, 0.5}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(DagGraph({{0, 1.0, 1.5}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(DagGraph({{1, 1.0, 0.5}}, {}), std::invalid_argument);
  // cycle
  CHECK_THROWS_AS(DagGraph({{0, 1.0, 0.1}, {1, 1.0, 0.1}}, {{0, 1}, {1, 0}}),
                  std::invalid_argument);
  // virtual root with nonzero cost or incoming edge
  CHECK_THROWS_AS(DagGraph({{0, 1.0, 0.0}}, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(DagGraph({{0, 0.0, 0.0}, {1, 1.0, 0.1}}, {{1, 0}}, 0),
                  std::invalid_argument);
}

TEST_CASE("merge_dags: chain plus diamond") {
  DagGraph merged = merge_dags({chain({1.0, 1.0, 1.0}), diamond()});
  CHECK(merged.node_count() == 8);
  CHECK(merged.virtual_root() == 0);
  CHECK(merged.children(0).size() == 2);  // one root per input
  // all input edges survive: 2 chain + 4 diamond + 2 root edges
  CHECK(merged.edges().size() == 8);

  DagGraph single = merge_dags({DagGraph({{0, 5.0, 0.5}}, {})});
  CHECK(single.node_count() == 2);
  CHECK(single.edges().size() == 1);
  CHECK(single.reaches(0, 1));

  CHECK_THROWS_AS(merge_dags({}), std::invalid_argument);
}

TEST_CASE("merge keeps joint makespan: merged equals disjoint union") {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<DagGraph> parts;
    for (int i = 0; i < 5; ++i) parts.push_back(random_dag(rng, 2 + rng.uniform_int(8)));
    DagGraph merged = merge_dags(parts);

    // Disjoint union without any root: same jobs scheduled jointly.
    std::vector<JobNode> nodes;
    std::vector<std::pair<int, int>> edges;
    int off = 0;
    for (const DagGraph& p : parts) {
      for (const JobNode& jn : p.nodes())
        nodes.push_back(JobNode{jn.id + off, jn.runtime, jn.resource});
      for (auto [u, v] : p.edges()) edges.emplace_back(u + off, v + off);
      off += p.node_count();
    }
    DagGraph joint(std::move(nodes), std::move(edges));

    for (auto rule : {PriorityRule::sjf(), PriorityRule::cp(), PriorityRule::tetris()})
      CHECK(makespan(merged, rule) == doctest::Approx(makespan(joint, rule)).epsilon(1e-12));
  }
}

TEST_CASE("is_conflicting: paths, cycles, root") {
  DagGraph g = chain({1.0, 1.0, 1.0});  // 0 -> 1 -> 2
  CHECK(is_conflicting(g, {0, 2}));     // transitive path
  CHECK(is_conflicting(g, {2, 0}));     // would create a cycle
  CHECK(is_conflicting(g, {1, 1}));     // self
  CHECK_THROWS_AS(is_conflicting(g, {0, 9}), std::invalid_argument);

  DagGraph two = independent({{1.0, 0.5}, {2.0, 0.5}});
  CHECK_FALSE(is_conflicting(two, {0, 1}));
  CHECK_FALSE(is_conflicting(two, {1, 0}));

  DagGraph merged = merge_dags({two});
  CHECK(is_conflicting(merged, {0, 1}));  // root may not be an endpoint
  CHECK(is_conflicting(merged, {1, 0}));
  CHECK_FALSE(is_conflicting(merged, {1, 2}));
}

TEST_CASE("add_edge updates reachability and rejects conflicts") {
  DagGraph g = independent({{1.0, 0.5}, {2.0, 0.5}});
  DagGraph g2 = add_edge(g, {0, 1});
  CHECK(g2.reaches(0, 1));
  CHECK_FALSE(g.reaches(0, 1));  // original untouched
  CHECK(is_conflicting(g2, {1, 0}));
  CHECK_THROWS_AS(add_edge(g2, {1, 0}), ConflictError);
  CHECK(g2.edges().size() == 1);
}

TEST_CASE("incremental reachability equals DFS recomputation") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + rng.uniform_int(12);
    DagGraph g = random_dag(rng, n);
    CHECK(g.reachability() == reachability_by_dfs(g));
    // grow with random legal edges, checking after every mutation
    for (int step = 0; step < 8; ++step) {
      std::vector<EdgeAction> legal;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (u != v && !is_conflicting(g, {u, v})) legal.push_back({u, v});
      if (legal.empty()) break;
      g = add_edge(g, legal[rng.uniform_int(int(legal.size()))]);
      CHECK(g.reachability() == reachability_by_dfs(g));
      CHECK_NOTHROW(g.topological_order());  // acyclicity preserved
    }
  }
}

TEST_CASE("qualified starting and ending nodes") {
  DagGraph two = merge_dags({independent({{1.0, 0.5}, {2.0, 0.5}})});
  CHECK(qualified_starting_nodes(two) == std::vector<int>{1, 2});
  CHECK(qualified_ending_nodes(two, 1) == std::vector<int>{2});

  DagGraph full = merge_dags({chain({1.0, 1.0, 1.0})});
  CHECK(qualified_starting_nodes(full).empty());

  // brute-force pair enumeration on random graphs
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    DagGraph g = merge_dags({random_dag(rng, 8)});
    std::vector<int> expect_starts;
    for (int u = 0; u < g.node_count(); ++u) {
      if (g.is_virtual_root(u)) continue;
      bool any = false;
      for (int v = 0; v < g.node_count() && !any; ++v)
        if (v != u && !g.is_virtual_root(v)) any = !is_conflicting(g, {u, v});
      if (any) expect_starts.push_back(u);
    }
    CHECK(qualified_starting_nodes(g) == expect_starts);
    for (int u : expect_starts) {
      std::vector<int> expect_ends;
      for (int v = 0; v < g.node_count(); ++v)
        if (v != u && !g.is_virtual_root(v) && !is_conflicting(g, {u, v}))
          expect_ends.push_back(v);
      CHECK(qualified_ending_nodes(g, u) == expect_ends);
    }
  }
}

TEST_CASE("json round trip") {
  DagGraph g = merge_dags({diamond(), chain({0.5, 0.25})});
  DagGraph back = load_dag_json(dag_to_json(g));
  CHECK(back.node_count() == g.node_count());
  CHECK(back.edges() == g.edges());
  CHECK(back.virtual_root() == g.virtual_root());
  for (int i = 0; i < g.node_count(); ++i) {
    CHECK(back.node(i).runtime == g.node(i).runtime);
    CHECK(back.node(i).resource == g.node(i).resource);
  }
  CHECK_THROWS_AS(load_dag_json("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(load_dag_json(R"({"nodes":[{"id":0,"runtime":1,"resource":2}]})"),
                  std::invalid_argument);
}
