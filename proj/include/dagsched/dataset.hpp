#pragma once

#include "dagsched/dag.hpp"
#include "dagsched/rng.hpp"

namespace dagsched {

enum class RuntimeMode { Uniform, Table };

struct GenConfig {
  int min_nodes = 2;
  int max_nodes = 18;
  RuntimeMode runtime_mode = RuntimeMode::Uniform;
  double resource_dist = 1.0;        // max node resource after per-graph scaling
  double expected_out_degree = 1.5;  // capped by the sampled layer structure
};

// Synthetic stand-in for profiled query-stage runtimes: a fixed long-tailed
// table sampled uniformly.
const std::vector<double>& runtime_table();

// Random weakly connected DAG: layered acyclic structure (edges only from
// lower to higher layer), runtimes from the configured distribution and
// resources scaled so the per-graph maximum equals resource_dist exactly.
DagGraph generate_dag(Rng& rng, const GenConfig& cfg);

struct Bucket {
  std::string name;      // e.g. "test_5"
  int num_dags = 0;
  std::vector<DagGraph> instances;  // merged graphs
};

// For each requested size, per_size instances, each the merge of that many
// freshly generated DAGs.
std::vector<Bucket> build_testsets(Rng& rng, const std::vector<int>& sizes,
                                   int per_size, const GenConfig& cfg);

struct CorpusConfig {
  GenConfig gen;
  int train_count = 200;
  std::vector<int> test_sizes = {5, 10, 20, 50, 100};
  int instances_per_size = 10;
  std::uint64_t seed = 1;
};

struct Corpus {
  std::vector<DagGraph> train;   // individual DAGs
  std::vector<Bucket> buckets;   // merged evaluation instances
};

// Writes train/ and test_<size>/ DAG files plus manifest.json under dir.
void generate_corpus(const CorpusConfig& cfg, const std::string& dir);

// Loads everything listed by dir/manifest.json.
Corpus load_corpus(const std::string& dir);

}  // namespace dagsched
