#include "support/fixtures.hpp"

#include <json.hpp>

#include "dagsched/milp.hpp"
#include "support/oracle.hpp"

namespace dagsched::testing::fixtures {

using nlohmann::json;

namespace {

std::string pad(int v, std::size_t width) {
  std::string s = std::to_string(v);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> generate_all() {
  std::vector<std::pair<std::string, std::string>> out;

  DagGraph two = independent({{5.0, 0.6}, {7.0, 0.6}});
  MilpModel two_model = build_milp(two);
  out.emplace_back("two_node.json", dag_to_json(two));
  out.emplace_back("two_node.lp", write_lp(two_model, false));
  out.emplace_back("two_node_relax.lp", write_lp(two_model, true));

  {
    Rng rng(kOracleSeed);
    json table;
    table["seed"] = kOracleSeed;
    table["instances"] = json::array();
    for (int i = 0; i < kOracleInstances; ++i) {
      const int n = 2 + rng.uniform_int(6);
      DagGraph g = random_dag(rng, n);
      BruteForceResult opt = brute_force_optimum(g);
      json inst;
      inst["dag"] = json::parse(dag_to_json(g));
      inst["optimum"] = opt.makespan;
      inst["order"] = opt.order;
      table["instances"].push_back(std::move(inst));
    }
    out.emplace_back("oracle/small_instances.json", table.dump(2) + "\n");
  }

  {
    Rng rng(kLpSeed);
    int idx = 0;
    for (int n = 2; n <= 7; ++n)
      for (int rep = 0; rep < 2; ++rep) {
        DagGraph g = random_dag(rng, n);
        const std::string stem = "lp/instance_" + pad(idx, 2);
        MilpModel m = build_milp(g);
        out.emplace_back(stem + ".json", dag_to_json(g));
        out.emplace_back(stem + ".relax.lp", write_lp(m, true));
        out.emplace_back(stem + ".int.lp", write_lp(m, false));
        ++idx;
      }
  }

  {
    Rng rng(kFig1Seed);
    auto found = find_edge_improvement(rng, 2000, 5);
    if (!found) throw std::runtime_error("edge-improvement search failed under seed");
    out.emplace_back("fig1/instance.json", dag_to_json(found->graph));
    json meta;
    meta["edge"] = {found->edge.start, found->edge.end};
    meta["sjf_before"] = found->sjf_before;
    meta["sjf_after"] = found->sjf_after;
    meta["cp_before"] = found->cp_before;
    meta["cp_after"] = found->cp_after;
    out.emplace_back("fig1/meta.json", meta.dump(2) + "\n");
  }
  return out;
}

}  // namespace dagsched::testing::fixtures
