#include "dagsched/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>

#include <json.hpp>

#include "dagsched/textio.hpp"

namespace dagsched {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<double>& runtime_table() {
  // Synthetic, hand-picked to be long-tailed: many sub-second stages, a few
  // multi-second stragglers.
  static const std::vector<double> table = {
      0.08, 0.11, 0.14, 0.17, 0.21, 0.24, 0.27, 0.31, 0.35, 0.38, 0.44,
      0.52, 0.58, 0.63, 0.71, 0.82, 0.94, 1.05, 1.17, 1.32, 1.48, 1.66,
      1.92, 2.24, 2.61, 3.05, 3.7,  4.6,  5.8,  7.4,  9.6,  13.5};
  return table;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

DagGraph generate_dag(Rng& rng, const GenConfig& cfg) {
  if (cfg.min_nodes < 1 || cfg.max_nodes < cfg.min_nodes)
    throw std::invalid_argument("generate_dag: bad node range");
  const int n = cfg.min_nodes + rng.uniform_int(cfg.max_nodes - cfg.min_nodes + 1);
  const int layers = n >= 2 ? 2 + rng.uniform_int(n - 1) : 1;

  // Random assignment with every layer non-empty: a random permutation seeds
  // one node per layer, the rest draw uniformly.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(i + 1)]);
  std::vector<int> layer(n, 0);
  for (int l = 0; l < layers; ++l) layer[perm[l]] = l;
  for (int k = layers; k < n; ++k) layer[perm[k]] = rng.uniform_int(layers);

  std::vector<std::pair<int, int>> edges;
  auto has_edge = [&](int u, int v) {
    return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
  };

  // Every node above layer 0 gets one parent from some lower layer.
  for (int v = 0; v < n; ++v) {
    if (layer[v] == 0) continue;
    std::vector<int> lower;
    for (int u = 0; u < n; ++u)
      if (layer[u] < layer[v]) lower.push_back(u);
    edges.emplace_back(lower[rng.uniform_int(int(lower.size()))], v);
  }

  // Extra density toward the expected out-degree.
  std::vector<std::pair<int, int>> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (layer[u] < layer[v] && !has_edge(u, v)) candidates.emplace_back(u, v);
  const int target = int(std::max(0.0, cfg.expected_out_degree * n - double(edges.size())));
  for (int k = 0; k < target && !candidates.empty(); ++k) {
    const int pick = rng.uniform_int(int(candidates.size()));
    edges.push_back(candidates[pick]);
    candidates.erase(candidates.begin() + pick);
  }

  // Weak connectivity fix-up: join components along a layer-increasing pair;
  // one always exists while more than one component remains (all layers are
  // non-empty, so nodes at two distinct layers exist).
  UnionFind uf(n);
  for (auto [u, v] : edges) uf.unite(u, v);
  while (true) {
    bool connected = true;
    for (int v = 1; v < n && connected; ++v) connected = uf.find(v) == uf.find(0);
    if (connected) break;
    bool added = false;
    for (int u = 0; u < n && !added; ++u)
      for (int v = 0; v < n && !added; ++v) {
        if (layer[u] < layer[v] && uf.find(u) != uf.find(v)) {
          edges.emplace_back(u, v);
          uf.unite(u, v);
          added = true;
        }
      }
  }

  std::vector<JobNode> nodes(n);
  std::vector<double> raw(n);
  double raw_max = 0.0;
  for (int i = 0; i < n; ++i) {
    raw[i] = rng.uniform_open();
    raw_max = std::max(raw_max, raw[i]);
  }
  for (int i = 0; i < n; ++i) {
    nodes[i].id = i;
    nodes[i].runtime = cfg.runtime_mode == RuntimeMode::Uniform
                           ? rng.uniform_open()
                           : runtime_table()[rng.uniform_int(int(runtime_table().size()))];
    nodes[i].resource = cfg.resource_dist * (raw[i] / raw_max);
  }
  return DagGraph(std::move(nodes), std::move(edges));
}

std::vector<Bucket> build_testsets(Rng& rng, const std::vector<int>& sizes,
                                   int per_size, const GenConfig& cfg) {
  std::vector<Bucket> out;
  for (int size : sizes) {
    if (size < 1) throw std::invalid_argument("build_testsets: size must be >= 1");
    Bucket b;
    b.name = "test_" + std::to_string(size);
    b.num_dags = size;
    for (int k = 0; k < per_size; ++k) {
      std::vector<DagGraph> parts;
      parts.reserve(size);
      for (int i = 0; i < size; ++i) parts.push_back(generate_dag(rng, cfg));
      b.instances.push_back(merge_dags(parts));
    }
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

std::string pad(int v, std::size_t width) {
  std::string s = std::to_string(v);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

void generate_corpus(const CorpusConfig& cfg, const std::string& dir) {
  fs::create_directories(fs::path(dir) / "train");
  Rng rng(cfg.seed);

  json manifest;
  manifest["version"] = 1;
  manifest["seed"] = cfg.seed;
  json splits = json::array();

  json train_files = json::array();
  for (int i = 0; i < cfg.train_count; ++i) {
    DagGraph g = generate_dag(rng, cfg.gen);
    const std::string rel = "train/dag_" + pad(i, 4) + ".json";
    save_dag_file(g, (fs::path(dir) / rel).string());
    train_files.push_back(rel);
  }
  splits.push_back({{"name", "train"}, {"num_dags", 1}, {"files", train_files}});

  for (const Bucket& b :
       build_testsets(rng, cfg.test_sizes, cfg.instances_per_size, cfg.gen)) {
    fs::create_directories(fs::path(dir) / b.name);
    json files = json::array();
    for (std::size_t k = 0; k < b.instances.size(); ++k) {
      const std::string rel = b.name + "/instance_" + pad(int(k), 2) + ".json";
      save_dag_file(b.instances[k], (fs::path(dir) / rel).string());
      files.push_back(rel);
    }
    splits.push_back({{"name", b.name}, {"num_dags", b.num_dags}, {"files", files}});
  }
  manifest["splits"] = std::move(splits);
  write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

Corpus load_corpus(const std::string& dir) {
  const json manifest = json::parse(read_text_file((fs::path(dir) / "manifest.json").string()));
  if (manifest.at("version").get<int>() != 1)
    throw std::invalid_argument("unsupported manifest version");
  Corpus c;
  for (const json& split : manifest.at("splits")) {
    const std::string name = split.at("name").get<std::string>();
    std::vector<DagGraph> graphs;
    for (const json& rel : split.at("files"))
      graphs.push_back(load_dag_file((fs::path(dir) / rel.get<std::string>()).string()));
    if (name == "train") {
      c.train = std::move(graphs);
    } else {
      Bucket b;
      b.name = name;
      b.num_dags = split.at("num_dags").get<int>();
      b.instances = std::move(graphs);
      c.buckets.push_back(std::move(b));
    }
  }
  return c;
}

}  // namespace dagsched
