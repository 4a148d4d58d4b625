#include "dagsched/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dagsched/textio.hpp"

namespace dagsched {

PriorityRule parse_rule(const std::string& name) {
  if (name == "sjf") return PriorityRule::sjf();
  if (name == "cp") return PriorityRule::cp();
  if (name == "tetris") return PriorityRule::tetris();
  throw std::invalid_argument("unknown rule: " + name);
}

std::string rule_name(const PriorityRule& r) {
  switch (r.rule) {
    case Rule::Sjf: return "sjf";
    case Rule::Cp: return "cp";
    case Rule::Tetris: return "tetris";
    case Rule::FixedOrder: return "fixed";
  }
  return "?";
}

std::vector<double> cp_priority(const DagGraph& g) {
  std::vector<double> pr(g.node_count(), 0.0);
  std::vector<int> order = g.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    double best = 0.0;
    for (int c : g.children(u)) best = std::max(best, pr[c]);
    pr[u] = g.node(u).runtime + best;
  }
  return pr;
}

namespace {

// Higher key schedules first.
std::vector<double> static_priority(const DagGraph& g, const PriorityRule& rule) {
  const int n = g.node_count();
  std::vector<double> key(n, 0.0);
  switch (rule.rule) {
    case Rule::Sjf:
      for (int i = 0; i < n; ++i) key[i] = -g.node(i).runtime;
      break;
    case Rule::Cp:
      key = cp_priority(g);
      break;
    case Rule::Tetris:
      break;  // recomputed per event
    case Rule::FixedOrder: {
      if (int(rule.order.size()) != n)
        throw std::invalid_argument("fixed order must cover all nodes");
      std::vector<bool> seen(n, false);
      for (std::size_t pos = 0; pos < rule.order.size(); ++pos) {
        const int id = rule.order[pos];
        if (id < 0 || id >= n || seen[id])
          throw std::invalid_argument("fixed order is not a permutation of node ids");
        seen[id] = true;
        key[id] = -double(pos);
      }
      break;
    }
  }
  return key;
}

}  // namespace

Schedule simulate(const DagGraph& g, const PriorityRule& rule) {
  const int n = g.node_count();
  for (const JobNode& jn : g.nodes())
    if (jn.resource > kCapacity)
      throw InfeasibleError("node " + std::to_string(jn.id) +
                            " needs more than the total capacity");

  Schedule sched;
  sched.start.assign(n, 0.0);
  if (n == 0) return sched;

  std::vector<double> key = static_priority(g, rule);
  std::vector<int> pending(n, 0);
  for (int i = 0; i < n; ++i) pending[i] = int(g.parents(i).size());

  std::vector<int> ready;
  for (int i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push_back(i);

  std::vector<double> finish(n, std::numeric_limits<double>::infinity());
  std::vector<char> done(n, 0);
  std::vector<int> running;
  double used = 0.0;
  double t = 0.0;
  int completed = 0;

  while (completed < n) {
    if (rule.rule == Rule::Tetris) {
      const double free = kCapacity - used;
      for (int id : ready) key[id] = g.node(id).resource * free;
    }
    std::sort(ready.begin(), ready.end(), [&](int a, int b) {
      if (key[a] != key[b]) return key[a] > key[b];
      return a < b;
    });

    // Greedy backfilling: start every ready node that fits, best first.
    std::vector<int> still_waiting;
    for (int id : ready) {
      if (g.node(id).resource <= kCapacity - used + kCapacityEps) {
        sched.start[id] = t;
        finish[id] = t + g.node(id).runtime;
        used += g.node(id).resource;
        running.push_back(id);
      } else {
        still_waiting.push_back(id);
      }
    }
    ready = std::move(still_waiting);

    if (running.empty()) {
      // Cannot happen on a valid instance: some node is always startable.
      throw InfeasibleError("scheduler stalled with no running node");
    }

    // Advance to the next completion; release everything finishing then.
    double next = std::numeric_limits<double>::infinity();
    for (int id : running) next = std::min(next, finish[id]);
    t = next;
    std::vector<int> still_running;
    for (int id : running) {
      if (finish[id] <= t) {
        used -= g.node(id).resource;
        done[id] = 1;
        ++completed;
        sched.makespan = std::max(sched.makespan, finish[id]);
        for (int c : g.children(id))
          if (--pending[c] == 0) ready.push_back(c);
      } else {
        still_running.push_back(id);
      }
    }
    running = std::move(still_running);
    // Resource arithmetic drift: clamp tiny negatives from float cancellation.
    if (used < 0.0 && used > -kCapacityEps) used = 0.0;
  }
  return sched;
}

double makespan(const DagGraph& g, const PriorityRule& rule) {
  return simulate(g, rule).makespan;
}

std::string schedule_to_text(const DagGraph& g, const Schedule& s) {
  std::string out = "node start finish\n";
  for (int i = 0; i < g.node_count(); ++i) {
    out += std::to_string(i) + " " + fmt_double(s.start[i]) + " " +
           fmt_double(s.start[i] + g.node(i).runtime) + "\n";
  }
  out += "makespan " + fmt_double(s.makespan) + "\n";
  return out;
}

}  // namespace dagsched
