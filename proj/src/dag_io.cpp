#include <json.hpp>

#include "dagsched/dag.hpp"
#include "dagsched/textio.hpp"

namespace dagsched {

using nlohmann::json;

DagGraph load_dag_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("DAG JSON parse error: ") + e.what());
  }
  std::vector<JobNode> nodes;
  for (const auto& jn : j.at("nodes")) {
    nodes.push_back(JobNode{jn.at("id").get<int>(), jn.at("runtime").get<double>(),
                            jn.at("resource").get<double>()});
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const JobNode& a, const JobNode& b) { return a.id < b.id; });
  std::vector<std::pair<int, int>> edges;
  if (j.contains("edges"))
    for (const auto& je : j.at("edges"))
      edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
  std::optional<int> root;
  if (j.contains("virtual_root") && !j.at("virtual_root").is_null())
    root = j.at("virtual_root").get<int>();
  return DagGraph(std::move(nodes), std::move(edges), root);
}

DagGraph load_dag_file(const std::string& path) {
  return load_dag_json(read_text_file(path));
}

std::string dag_to_json(const DagGraph& g) {
  json j;
  j["nodes"] = json::array();
  for (const JobNode& n : g.nodes())
    j["nodes"].push_back({{"id", n.id}, {"runtime", n.runtime}, {"resource", n.resource}});
  j["edges"] = json::array();
  for (auto [u, v] : g.edges()) j["edges"].push_back({u, v});
  if (g.virtual_root()) j["virtual_root"] = *g.virtual_root();
  return j.dump(2) + "\n";
}

void save_dag_file(const DagGraph& g, const std::string& path) {
  write_text_file(path, dag_to_json(g));
}

}  // namespace dagsched
