#pragma once

#include <functional>

#include "dagsched/policy.hpp"
#include "dagsched/schedule.hpp"

namespace dagsched {

// One sampled step: the graph the action was taken in, the action, and the
// reward (raw makespan drop, later overwritten with the adjusted value).
struct RolloutRecord {
  DagGraph graph;
  EdgeAction action;
  double reward = 0.0;
};

// Grid of N rollouts, each up to M records (fewer when a rollout ran out of
// legal actions), plus the merged graph's baseline makespan.
struct RolloutBatch {
  std::vector<std::vector<RolloutRecord>> rollouts;
  double t0 = 0.0;         // makespan of the merged graph before any edges
  DagGraph merged;
};

struct TrainConfig {
  double lr = 1e-3;        // ascent step
  int iterations = 10000;
  int rollouts = 10;       // N
  int edges = 3;           // M edges added per rollout
  int hops = 3;            // message-passing rounds (<= model hops)
  double gamma = 1.0;      // reward discount
  double epsilon = 0.05;   // per-decision chance of a uniform action
  PriorityRule rule = PriorityRule::sjf();
  std::uint64_t seed = 1;

  // Per-iteration dag-count draw: exponential with the given mean, rounded up
  // and clamped to [min_dags, max_dags].
  double dag_count_mean = 5.0;
  int min_dags = 1;
  int max_dags = 20;

  int eval_every = 100;    // 0 disables periodic evaluation
  int eval_edges = 5;      // ensemble depth used when evaluating
  int eval_beam = 10;
};

// Runs N rollouts of M sampled edge additions each on the merge of `dags`.
// The reward of each step is the makespan drop it caused under `rule`.
RolloutBatch rollout(const std::vector<DagGraph>& dags, int n, int m, int hops,
                     Model& model, const PriorityRule& rule, double epsilon, Rng& rng);

// In place: per rollout the rewards become discounted suffix sums, then the
// per-step mean across rollouts (over rollouts that reached the step) is
// subtracted, and the result is divided by t0 (skipped when t0 == 0).
void adjust_rewards(RolloutBatch& batch, double gamma);

struct EvalPoint {
  int iteration = 0;
  std::vector<double> bucket_makespans;  // mean per eval bucket
};

struct TrainResult {
  std::vector<EvalPoint> log;
  std::vector<std::string> bucket_names;
};

// Policy-gradient training: each iteration samples a dag count and that many
// dags (with replacement), rolls out, adjusts rewards, accumulates
// reward-weighted log-probability gradients over all records and takes one
// ascent step on all parameters. Aborts with a diagnostic if any parameter
// turns non-finite. eval_buckets entries are (name, merged instances).
TrainResult train(Model& model, const std::vector<DagGraph>& dataset,
                  const TrainConfig& cfg,
                  const std::vector<std::pair<std::string, std::vector<DagGraph>>>&
                      eval_buckets = {},
                  const std::function<void(const EvalPoint&)>& on_eval = {});

// CSV with header iteration,<bucket>... one row per evaluation point.
std::string convergence_csv(const TrainResult& r);

}  // namespace dagsched
