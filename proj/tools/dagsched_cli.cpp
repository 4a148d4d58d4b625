// Command-line front end: dataset generation, training, inference, LP export
// and the benchmark reports.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "dagsched/bench.hpp"
#include "dagsched/dataset.hpp"
#include "dagsched/inference.hpp"
#include "dagsched/milp.hpp"
#include "dagsched/model.hpp"
#include "dagsched/textio.hpp"
#include "dagsched/trainer.hpp"

namespace fs = std::filesystem;
using namespace dagsched;

namespace {

// --data paths resolve against DAGSCHED_DATA_ROOT when set and relative.
std::string resolve_data_dir(const std::string& dir) {
  const char* root = std::getenv("DAGSCHED_DATA_ROOT");
  if (root && !dir.empty() && !fs::path(dir).is_absolute())
    return (fs::path(root) / dir).string();
  return dir;
}

std::vector<PriorityRule> parse_rules(const std::string& csv) {
  std::vector<PriorityRule> rules;
  std::size_t pos = 0;
  while (pos != std::string::npos) {
    const std::size_t comma = csv.find(',', pos);
    const std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) rules.push_back(parse_rule(tok));
    pos = comma == std::string::npos ? comma : comma + 1;
  }
  if (rules.empty()) throw std::invalid_argument("no rules given");
  return rules;
}

struct ModelFlags {
  int embed_dim = 64;
  int gnn_layers = 2;
  int hops = 3;
  int policy_hidden = 64;
  int policy_blocks = 2;

  void attach(CLI::App* cmd) {
    cmd->add_option("--embed-dim", embed_dim, "embedding width");
    cmd->add_option("--gnn-layers", gnn_layers, "initial dense layers");
    cmd->add_option("--hops", hops, "message-passing rounds");
    cmd->add_option("--policy-hidden", policy_hidden, "policy network width");
    cmd->add_option("--policy-blocks", policy_blocks, "residual blocks per policy");
  }
  ModelConfig config() const {
    return ModelConfig{embed_dim, gnn_layers, hops, policy_hidden, policy_blocks};
  }
};

std::vector<std::pair<std::string, std::vector<DagGraph>>> eval_pairs(
    const Corpus& corpus, const std::vector<std::string>& wanted) {
  std::vector<std::pair<std::string, std::vector<DagGraph>>> out;
  for (const Bucket& b : corpus.buckets) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), b.name) == wanted.end())
      continue;
    out.emplace_back(b.name, b.instances);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DAG scheduling lab: heuristics, learned edge additions, LP bounds"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a synthetic corpus");
  std::string gen_out;
  CorpusConfig corpus_cfg;
  std::string runtime_mode = "uniform";
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", corpus_cfg.seed, "rng seed");
  gen->add_option("--train-count", corpus_cfg.train_count, "individual training DAGs");
  gen->add_option("--sizes", corpus_cfg.test_sizes, "merged test bucket sizes")
      ->delimiter(',');
  gen->add_option("--per-size", corpus_cfg.instances_per_size, "instances per bucket");
  gen->add_option("--dist", corpus_cfg.gen.resource_dist,
                  "max node resource per graph (e.g. 1.0, 0.6667, 0.3333)");
  gen->add_option("--runtime", runtime_mode, "uniform | table");
  gen->add_option("--min-nodes", corpus_cfg.gen.min_nodes, "min nodes per DAG");
  gen->add_option("--max-nodes", corpus_cfg.gen.max_nodes, "max nodes per DAG");
  gen->add_option("--out-degree", corpus_cfg.gen.expected_out_degree,
                  "expected edges per node");

  // ---- train --------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "policy-gradient training");
  std::string train_data, train_ckpt_out, train_log;
  std::vector<std::string> train_eval_buckets;
  TrainConfig tcfg;
  std::string train_rule = "sjf";
  ModelFlags train_model_flags;
  train_cmd->add_option("--data", train_data, "corpus directory")->required();
  train_cmd->add_option("--out", train_ckpt_out, "checkpoint output path")->required();
  train_cmd->add_option("--log", train_log, "convergence CSV output path");
  train_cmd->add_option("--rule", train_rule, "sjf | cp | tetris");
  train_cmd->add_option("--edges", tcfg.edges, "edges added per rollout (M)");
  train_cmd->add_option("--rollouts", tcfg.rollouts, "rollouts per iteration (N)");
  train_cmd->add_option("--iters", tcfg.iterations, "training iterations (I)");
  train_cmd->add_option("--lr", tcfg.lr, "learning rate");
  train_cmd->add_option("--eps", tcfg.epsilon, "exploration probability");
  train_cmd->add_option("--gamma", tcfg.gamma, "reward discount");
  train_cmd->add_option("--seed", tcfg.seed, "rng seed");
  train_cmd->add_option("--dag-count-mean", tcfg.dag_count_mean,
                        "mean of the per-iteration dag-count draw");
  train_cmd->add_option("--min-dags", tcfg.min_dags, "dag-count lower clamp");
  train_cmd->add_option("--max-dags", tcfg.max_dags, "dag-count upper clamp");
  train_cmd->add_option("--eval-every", tcfg.eval_every, "evaluation cadence (0 = off)");
  train_cmd->add_option("--eval-edges", tcfg.eval_edges, "ensemble depth at evaluation");
  train_cmd->add_option("--eval-beam", tcfg.eval_beam, "beam width at evaluation");
  train_cmd->add_option("--eval-buckets", train_eval_buckets,
                        "bucket names to evaluate (default: all)")
      ->delimiter(',');
  train_model_flags.attach(train_cmd);

  // ---- infer --------------------------------------------------------------
  auto* infer_cmd = app.add_subcommand("infer", "beam-search edge addition");
  std::string infer_ckpt, infer_dag, infer_rule = "sjf", infer_out;
  int infer_edges_n = 1, infer_beam = 10;
  infer_cmd->add_option("--ckpt", infer_ckpt, "checkpoint path")->required();
  infer_cmd->add_option("--dag", infer_dag, "DAG JSON file")->required();
  infer_cmd->add_option("--rule", infer_rule, "sjf | cp | tetris");
  infer_cmd->add_option("--edges", infer_edges_n, "edges to add (M)");
  infer_cmd->add_option("--beam", infer_beam, "beam width (K)");
  infer_cmd->add_option("--out", infer_out, "write the augmented DAG here");

  // ---- milp ---------------------------------------------------------------
  auto* milp_cmd = app.add_subcommand("milp", "emit the scheduling model as LP text");
  std::string milp_dag, milp_out, milp_solution;
  bool milp_relax = false;
  milp_cmd->add_option("--dag", milp_dag, "DAG JSON file")->required();
  milp_cmd->add_option("--out", milp_out, "LP output path");
  milp_cmd->add_flag("--relax", milp_relax, "relax binaries to [0,1]");
  milp_cmd->add_option("--solution", milp_solution,
                       "solver solution file: print the start-order schedule");

  // ---- bench --------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "benchmark reports");
  bench->require_subcommand(1);

  auto* table_cmd = bench->add_subcommand("table", "baseline vs learned table");
  std::string table_data, table_ckpt, table_rules = "sjf,cp", table_csv, table_lp_dir;
  bool table_baseline_only = false;
  BenchOptions table_opt;
  table_cmd->add_option("--data", table_data, "corpus directory")->required();
  table_cmd->add_option("--ckpt", table_ckpt, "checkpoint path");
  table_cmd->add_flag("--baseline-only", table_baseline_only,
                      "report heuristics without a model");
  table_cmd->add_option("--rules", table_rules, "comma-separated rules");
  table_cmd->add_option("--edges", table_opt.m_max, "ensemble depth");
  table_cmd->add_option("--beam", table_opt.beam, "beam width");
  table_cmd->add_option("--lp-dir", table_lp_dir, "directory of LP solution files");
  table_cmd->add_option("--lp-max-dags", table_opt.lp_max_dags,
                        "largest bucket with an LP column");
  table_cmd->add_option("--csv", table_csv, "CSV output path");

  auto* sweep_cmd = bench->add_subcommand("sweep", "reduction vs added-edge count");
  std::string sweep_data, sweep_ckpt, sweep_rule = "sjf", sweep_csv, sweep_instance_csv;
  int sweep_max_edges = 5, sweep_beam = 10;
  sweep_cmd->add_option("--data", sweep_data, "corpus directory")->required();
  sweep_cmd->add_option("--ckpt", sweep_ckpt, "checkpoint path")->required();
  sweep_cmd->add_option("--rule", sweep_rule, "sjf | cp | tetris");
  sweep_cmd->add_option("--max-edges", sweep_max_edges, "sweep upper bound");
  sweep_cmd->add_option("--beam", sweep_beam, "beam width");
  sweep_cmd->add_option("--csv", sweep_csv, "CSV output path");
  sweep_cmd->add_option("--per-instance-csv", sweep_instance_csv,
                        "per-instance CSV output path");

  auto* conv_cmd = bench->add_subcommand("convergence", "smooth a training log");
  std::string conv_log, conv_csv;
  int conv_window = 5;
  conv_cmd->add_option("--log", conv_log, "convergence CSV from train")->required();
  conv_cmd->add_option("--window", conv_window, "trailing window (rows)");
  conv_cmd->add_option("--csv", conv_csv, "smoothed CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (runtime_mode == "uniform")
        corpus_cfg.gen.runtime_mode = RuntimeMode::Uniform;
      else if (runtime_mode == "table")
        corpus_cfg.gen.runtime_mode = RuntimeMode::Table;
      else
        throw std::invalid_argument("unknown runtime mode: " + runtime_mode);
      generate_corpus(corpus_cfg, gen_out);
      std::cout << "corpus written to " << gen_out << "\n";
    } else if (*train_cmd) {
      Corpus corpus = load_corpus(resolve_data_dir(train_data));
      tcfg.rule = parse_rule(train_rule);
      tcfg.hops = train_model_flags.hops;
      Model model = make_model(train_model_flags.config(), tcfg.seed);
      auto buckets = eval_pairs(corpus, train_eval_buckets);
      TrainResult result =
          train(model, corpus.train, tcfg, buckets, [&](const EvalPoint& p) {
            std::cout << "iter " << p.iteration;
            for (std::size_t i = 0; i < p.bucket_makespans.size(); ++i)
              std::cout << " " << buckets[i].first << "=" << p.bucket_makespans[i];
            std::cout << "\n";
          });
      save_model(model, train_ckpt_out);
      if (!train_log.empty()) write_text_file(train_log, convergence_csv(result));
      std::cout << "checkpoint written to " << train_ckpt_out << "\n";
    } else if (*infer_cmd) {
      Model model = load_model(infer_ckpt);
      DagGraph g = load_dag_file(infer_dag);
      PriorityRule rule = parse_rule(infer_rule);
      const double before = makespan(g, rule);
      DagGraph out = infer_edges(g, infer_edges_n, infer_beam, model, model.cfg.hops);
      const double after = makespan(out, rule);
      for (std::size_t i = g.edges().size(); i < out.edges().size(); ++i)
        std::cout << "added edge " << out.edges()[i].first << " -> "
                  << out.edges()[i].second << "\n";
      std::cout << "makespan " << fmt_double(before) << " -> " << fmt_double(after)
                << " (" << rule_name(rule) << ")\n";
      if (!infer_out.empty()) save_dag_file(out, infer_out);
    } else if (*milp_cmd) {
      DagGraph g = load_dag_file(milp_dag);
      if (!milp_solution.empty()) {
        auto sol = read_solution(read_text_file(milp_solution));
        PriorityRule order = order_from_solution(sol, g);
        Schedule s = simulate(g, order);
        std::cout << schedule_to_text(g, s);
      } else {
        MilpModel model = build_milp(g);
        const std::string text = write_lp(model, milp_relax);
        if (milp_out.empty())
          std::cout << text;
        else
          write_text_file(milp_out, text);
      }
    } else if (*table_cmd) {
      Corpus corpus = load_corpus(resolve_data_dir(table_data));
      table_opt.rules = parse_rules(table_rules);
      table_opt.lp_dir = table_lp_dir;
      std::optional<Model> model;
      if (!table_baseline_only) {
        if (table_ckpt.empty())
          throw std::invalid_argument("bench table needs --ckpt or --baseline-only");
        model = load_model(table_ckpt);
      }
      BenchTable t = run_table(corpus.buckets, model ? &*model : nullptr, table_opt);
      std::cout << table_to_text(t);
      if (!table_csv.empty()) write_text_file(table_csv, table_to_csv(t));
    } else if (*sweep_cmd) {
      Corpus corpus = load_corpus(resolve_data_dir(sweep_data));
      Model model = load_model(sweep_ckpt);
      SweepResult s = sweep_edges(corpus.buckets, model, parse_rule(sweep_rule),
                                  sweep_max_edges, sweep_beam);
      std::cout << sweep_to_csv(s);
      if (!sweep_csv.empty()) write_text_file(sweep_csv, sweep_to_csv(s));
      if (!sweep_instance_csv.empty())
        write_text_file(sweep_instance_csv, s.per_instance_csv);
    } else if (*conv_cmd) {
      const std::string smoothed =
          smooth_convergence_csv(read_text_file(conv_log), conv_window);
      if (conv_csv.empty())
        std::cout << smoothed;
      else
        write_text_file(conv_csv, smoothed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
