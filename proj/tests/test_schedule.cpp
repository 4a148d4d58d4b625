#include <doctest.h>

#include "dagsched/schedule.hpp"
#include "support/oracle.hpp"

using namespace dagsched;
using namespace dagsched::testing;

TEST_CASE("cp_priority: path sums") {
  DagGraph g = chain({3.0, 2.0, 1.0});
  CHECK(cp_priority(g) == std::vector<double>{6.0, 3.0, 1.0});

  DagGraph single = independent({{5.0, 1.0}});
  CHECK(cp_priority(single) == std::vector<double>{5.0});

  // longest path by explicit enumeration on random graphs
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    DagGraph r = random_dag(rng, 10);
    std::vector<double> pr = cp_priority(r);
    for (int v = 0; v < r.node_count(); ++v) {
      // depth-first enumeration of all paths from v
      double best = 0.0;
      std::vector<std::pair<int, double>> stack{{v, r.node(v).runtime}};
      while (!stack.empty()) {
        auto [u, acc] = stack.back();
        stack.pop_back();
        if (r.children(u).empty()) best = std::max(best, acc);
        for (int c : r.children(u)) stack.push_back({c, acc + r.node(c).runtime});
      }
      CHECK(pr[v] == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("simulate: parallel vs serial resource fit") {
  DagGraph par = independent({{5.0, 0.5}, {7.0, 0.5}});
  CHECK(makespan(par, PriorityRule::sjf()) == 7.0);

  DagGraph serial = independent({{5.0, 1.0}, {7.0, 1.0}});
  CHECK(makespan(serial, PriorityRule::sjf()) == 12.0);

  // a full-capacity node is legal and runs alone
  DagGraph full = independent({{1.0, 1.0}, {1.0, 1.0}});
  CHECK(makespan(full, PriorityRule::sjf()) == 2.0);
  // over-capacity nodes are rejected at construction already
  CHECK_THROWS_AS(DagGraph({{0, 1.0, 1.2}}, {}), std::invalid_argument);
}

TEST_CASE("simulate: empty-ish and chain cases") {
  DagGraph root_only({{0, 0.0, 0.0}}, {}, 0);
  CHECK(makespan(root_only, PriorityRule::sjf()) == 0.0);

  DagGraph c = chain({1.5, 2.5, 3.0});
  for (auto rule : {PriorityRule::sjf(), PriorityRule::cp(), PriorityRule::tetris()})
    CHECK(makespan(c, rule) == doctest::Approx(7.0));
}

TEST_CASE("simulate: schedules satisfy all invariants") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    DagGraph g = trial % 2 == 0 ? random_dag(rng, 2 + rng.uniform_int(17))
                                : merge_dags({random_dag(rng, 4), random_dag(rng, 5)});
    for (auto rule : {PriorityRule::sjf(), PriorityRule::cp(), PriorityRule::tetris()}) {
      Schedule s = simulate(g, rule);
      const std::string err = validate_schedule(g, s);
      CHECK_MESSAGE(err.empty(), err);
    }
  }
}

TEST_CASE("simulate: determinism is bitwise") {
  Rng rng(23);
  DagGraph g = merge_dags({random_dag(rng, 9), random_dag(rng, 7)});
  for (auto rule : {PriorityRule::sjf(), PriorityRule::cp(), PriorityRule::tetris()}) {
    Schedule a = simulate(g, rule);
    Schedule b = simulate(g, rule);
    CHECK(a.start == b.start);
    CHECK(a.makespan == b.makespan);
  }
}

TEST_CASE("simulate: heuristics never beat the permutation optimum") {
  Rng rng(31);
  int done = 0;
  while (done < 25) {
    // seven nodes, at most three distinct runtimes
    DagGraph base = random_dag(rng, 7);
    std::vector<double> palette{0.5 + rng.uniform(), 1.0 + rng.uniform(), 2.0 + rng.uniform()};
    std::vector<JobNode> nodes;
    for (const JobNode& jn : base.nodes())
      nodes.push_back(JobNode{jn.id, palette[std::size_t(rng.uniform_int(3))], jn.resource});
    DagGraph g(std::move(nodes), base.edges());

    BruteForceResult opt = brute_force_optimum(g);
    for (auto rule : {PriorityRule::sjf(), PriorityRule::cp(), PriorityRule::tetris()})
      CHECK(makespan(g, rule) >= opt.makespan - 1e-9);
    CHECK(makespan(g, PriorityRule::fixed(opt.order)) == doctest::Approx(opt.makespan));
    ++done;
  }
}

TEST_CASE("fixed order must be a permutation") {
  DagGraph g = independent({{1.0, 0.5}, {2.0, 0.5}});
  CHECK_THROWS_AS(simulate(g, PriorityRule::fixed({0})), std::invalid_argument);
  CHECK_THROWS_AS(simulate(g, PriorityRule::fixed({0, 0})), std::invalid_argument);
  CHECK_NOTHROW(simulate(g, PriorityRule::fixed({1, 0})));
}

TEST_CASE("schedule text export is stable") {
  DagGraph g = independent({{1.5, 0.5}, {2.0, 0.5}});
  Schedule s = simulate(g, PriorityRule::sjf());
  CHECK(schedule_to_text(g, s) ==
        "node start finish\n0 0 1.5\n1 0 2\nmakespan 2\n");
}

TEST_CASE("rule parsing") {
  CHECK(parse_rule("sjf").rule == Rule::Sjf);
  CHECK(parse_rule("cp").rule == Rule::Cp);
  CHECK(parse_rule("tetris").rule == Rule::Tetris);
  CHECK_THROWS_AS(parse_rule("fifo"), std::invalid_argument);
}
