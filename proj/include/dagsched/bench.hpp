#pragma once

#include <optional>

#include "dagsched/dataset.hpp"
#include "dagsched/inference.hpp"

namespace dagsched {

struct BenchOptions {
  std::vector<PriorityRule> rules = {PriorityRule::sjf(), PriorityRule::cp()};
  int m_max = 5;
  int beam = 10;
  int hops = -1;             // -1: use the model's configured hop count
  std::string lp_dir;        // directory of <bucket>_instance_<k>.sol files
  int lp_max_dags = 20;      // larger buckets report no LP column
};

struct BenchCell {
  double time = 0.0;     // mean baseline makespan
  double learn = 0.0;    // mean ensemble makespan
  double reduce_pct = 0.0;
};

struct BenchRow {
  std::string bucket;
  int num_dags = 0;
  std::vector<BenchCell> cells;  // one per rule
  double tetris = 0.0;
  std::optional<double> lp_order;
};

struct BenchTable {
  std::vector<std::string> rule_names;
  std::vector<BenchRow> rows;
  BenchRow average;  // unweighted mean over bucket rows
};

// Per bucket and rule: mean baseline makespan, mean ensemble (m = 0..m_max)
// makespan and the reduction percentage, plus a Tetris column and, where
// solution files exist and the bucket is small enough, the schedule makespan
// under the LP-derived order. model == nullptr is baseline-only mode (learn
// column equals the baseline).
BenchTable run_table(const std::vector<Bucket>& buckets, Model* model,
                     const BenchOptions& opt);

std::string table_to_csv(const BenchTable& t);
std::string table_to_text(const BenchTable& t);

struct SweepResult {
  std::vector<std::string> bucket_names;
  // reduction percentage per added-edge count (row m-1) and bucket (column)
  std::vector<std::vector<double>> reduce_pct;
  // per bucket: max over the fixed-m rows and 0
  std::vector<double> ensemble_pct;
  std::string per_instance_csv;  // bucket,instance,m,makespan,reduce_pct
};

// Reduction-ratio series for m = 1..m_max added edges under one rule.
SweepResult sweep_edges(const std::vector<Bucket>& buckets, Model& model,
                        const PriorityRule& rule, int m_max, int beam, int hops = -1);

std::string sweep_to_csv(const SweepResult& s);

// Trailing-window moving average over each value column of a convergence CSV
// (header: iteration,<bucket>,...). Window w >= 1 rows.
std::string smooth_convergence_csv(const std::string& csv_text, int window);

}  // namespace dagsched
