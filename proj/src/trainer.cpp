#include "dagsched/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "dagsched/inference.hpp"
#include "dagsched/textio.hpp"

namespace dagsched {

namespace {

// Sample an index: with probability epsilon uniform over the candidates,
// otherwise from the policy probabilities.
int sample_action(const ActionDistribution& d, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.uniform() < epsilon)
    return d.candidate_ids[rng.uniform_int(int(d.candidate_ids.size()))];
  return d.candidate_ids[sample_discrete(d.probs, rng.uniform())];
}

}  // namespace

RolloutBatch rollout(const std::vector<DagGraph>& dags, int n, int m, int hops,
                     Model& model, const PriorityRule& rule, double epsilon,
                     Rng& rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("rollout: N and M must be >= 1");
  RolloutBatch batch;
  batch.merged = merge_dags(dags);
  batch.t0 = makespan(batch.merged, rule);
  batch.rollouts.resize(n);

  for (int i = 0; i < n; ++i) {
    Rng stream = rng.fork(std::uint64_t(i) + 1);
    DagGraph g = batch.merged;
    double current_makespan = batch.t0;
    for (int j = 0; j < m; ++j) {
      Tape tape;
      Embeddings ems = embed(tape, g, model, hops);
      ActionDistribution d1;
      try {
        d1 = start_node_distribution(tape, g, ems, model);
      } catch (const NoActionError&) {
        break;  // graph saturated: rollout ends with fewer than m records
      }
      const int a1 = sample_action(d1, epsilon, stream);
      ActionDistribution d2 = end_node_distribution(tape, g, ems, model, a1);
      const int a2 = sample_action(d2, epsilon, stream);

      const EdgeAction action{a1, a2};
      DagGraph next = add_edge(g, action);
      const double next_makespan = makespan(next, rule);
      batch.rollouts[i].push_back(
          RolloutRecord{g, action, current_makespan - next_makespan});
      g = std::move(next);
      current_makespan = next_makespan;
    }
  }
  return batch;
}

void adjust_rewards(RolloutBatch& batch, double gamma) {
  std::size_t max_len = 0;
  for (const auto& r : batch.rollouts) max_len = std::max(max_len, r.size());

  // Discounted suffix sums per rollout.
  for (auto& r : batch.rollouts) {
    double acc = 0.0;
    for (auto it = r.rbegin(); it != r.rend(); ++it) {
      acc = it->reward + gamma * acc;
      it->reward = acc;
    }
  }

  // Per-step baseline over the rollouts that reached the step.
  for (std::size_t j = 0; j < max_len; ++j) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : batch.rollouts)
      if (j < r.size()) {
        sum += r[j].reward;
        ++count;
      }
    const double baseline = sum / count;
    for (auto& r : batch.rollouts)
      if (j < r.size()) {
        r[j].reward -= baseline;
        if (batch.t0 != 0.0) r[j].reward /= batch.t0;
      }
  }
}

namespace {

double eval_bucket_mean(const std::vector<DagGraph>& instances, Model& model,
                        const TrainConfig& cfg) {
  double sum = 0.0;
  for (const DagGraph& g : instances)
    sum += ensemble_best(g, cfg.rule, cfg.eval_edges, cfg.eval_beam, model, cfg.hops)
               .makespan;
  return instances.empty() ? 0.0 : sum / double(instances.size());
}

}  // namespace

TrainResult train(Model& model, const std::vector<DagGraph>& dataset,
                  const TrainConfig& cfg,
                  const std::vector<std::pair<std::string, std::vector<DagGraph>>>&
                      eval_buckets,
                  const std::function<void(const EvalPoint&)>& on_eval) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.hops > model.cfg.hops)
    throw std::invalid_argument("train: hops exceed model configuration");

  TrainResult result;
  for (const auto& [name, _] : eval_buckets) result.bucket_names.push_back(name);

  Rng rng(cfg.seed);
  auto evaluate = [&](int iter) {
    if (eval_buckets.empty()) return;
    EvalPoint p;
    p.iteration = iter;
    for (const auto& [_, instances] : eval_buckets)
      p.bucket_makespans.push_back(eval_bucket_mean(instances, model, cfg));
    result.log.push_back(p);
    if (on_eval) on_eval(result.log.back());
  };

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    // Exponentially distributed dag count, rounded up and clamped.
    const double x = -cfg.dag_count_mean * std::log(1.0 - rng.uniform());
    const int num_dags = std::clamp(int(std::ceil(x)), cfg.min_dags, cfg.max_dags);

    std::vector<DagGraph> sample;
    sample.reserve(num_dags);
    for (int k = 0; k < num_dags; ++k)
      sample.push_back(dataset[rng.uniform_int(int(dataset.size()))]);

    Rng rollout_rng = rng.fork(0x726f6cull * std::uint64_t(iter));
    RolloutBatch batch = rollout(sample, cfg.rollouts, cfg.edges, cfg.hops, model,
                                 cfg.rule, cfg.epsilon, rollout_rng);
    adjust_rewards(batch, cfg.gamma);

    model.params.zero_grads();
    for (const auto& r : batch.rollouts) {
      for (const RolloutRecord& rec : r) {
        if (rec.reward == 0.0) continue;  // zero weight contributes nothing
        Tape tape;
        Embeddings ems = embed(tape, rec.graph, model, cfg.hops);
        Tape::Ref lp = joint_log_prob(tape, rec.graph, ems, model, rec.action);
        tape.backward(lp, rec.reward);
      }
    }
    sgd_step(model.params, cfg.lr);

    if (!model.params.all_finite())
      throw std::runtime_error("train: parameters diverged (non-finite) at iteration " +
                               std::to_string(iter));

    if (cfg.eval_every > 0 && (iter % cfg.eval_every == 0 || iter == cfg.iterations))
      evaluate(iter);
  }
  return result;
}

std::string convergence_csv(const TrainResult& r) {
  std::string out = "iteration";
  for (const std::string& b : r.bucket_names) out += "," + b;
  out += "\n";
  for (const EvalPoint& p : r.log) {
    out += std::to_string(p.iteration);
    for (double v : p.bucket_makespans) out += "," + fmt_double(v);
    out += "\n";
  }
  return out;
}

}  // namespace dagsched
