#pragma once

#include <string>
#include <vector>

#include "dagsched/dag.hpp"

namespace dagsched {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Total resource capacity and the tolerance used in capacity comparisons.
inline constexpr double kCapacity = 1.0;
inline constexpr double kCapacityEps = 1e-9;

enum class Rule { Sjf, Cp, Tetris, FixedOrder };

struct PriorityRule {
  Rule rule = Rule::Sjf;
  std::vector<int> order;  // FixedOrder only: permutation of node ids

  static PriorityRule sjf() { return {Rule::Sjf, {}}; }
  static PriorityRule cp() { return {Rule::Cp, {}}; }
  static PriorityRule tetris() { return {Rule::Tetris, {}}; }
  static PriorityRule fixed(std::vector<int> order) {
    return {Rule::FixedOrder, std::move(order)};
  }
};

PriorityRule parse_rule(const std::string& name);  // "sjf" | "cp" | "tetris"
std::string rule_name(const PriorityRule& r);

struct Schedule {
  std::vector<double> start;  // indexed by node id
  double makespan = 0.0;
};

// Longest total runtime from each node to any leaf, along directed paths.
std::vector<double> cp_priority(const DagGraph& g);

// Event-driven non-preemptive list scheduling under unit capacity. At every
// event the ready set is scanned in descending priority (SJF: shortest
// runtime first; CP: largest cp_priority first; Tetris: largest
// resource*free-capacity first, recomputed per event; FixedOrder: list
// position) and every node that fits the remaining capacity is started
// (greedy backfilling). Ties break toward the lower node id. Deterministic.
Schedule simulate(const DagGraph& g, const PriorityRule& rule);

double makespan(const DagGraph& g, const PriorityRule& rule);

// (node, start, finish) rows plus a makespan footer; stable text for golden
// files.
std::string schedule_to_text(const DagGraph& g, const Schedule& s);

}  // namespace dagsched
