#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace dagsched::testing {

DagGraph chain(const std::vector<double>& runtimes, double resource) {
  std::vector<JobNode> nodes;
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < runtimes.size(); ++i) {
    nodes.push_back(JobNode{int(i), runtimes[i], resource});
    if (i > 0) edges.emplace_back(int(i) - 1, int(i));
  }
  return DagGraph(std::move(nodes), std::move(edges));
}

DagGraph independent(const std::vector<std::pair<double, double>>& jobs) {
  std::vector<JobNode> nodes;
  for (std::size_t i = 0; i < jobs.size(); ++i)
    nodes.push_back(JobNode{int(i), jobs[i].first, jobs[i].second});
  return DagGraph(std::move(nodes), {});
}

DagGraph random_dag(Rng& rng, int n, double resource_dist) {
  GenConfig cfg;
  cfg.min_nodes = n;
  cfg.max_nodes = n;
  cfg.resource_dist = resource_dist;
  return generate_dag(rng, cfg);
}

std::string validate_schedule(const DagGraph& g, const Schedule& s) {
  const int n = g.node_count();
  if (int(s.start.size()) != n) return "start vector size mismatch";

  for (auto [u, v] : g.edges())
    if (s.start[u] + g.node(u).runtime > s.start[v] + kCapacityEps)
      return "precedence violated on edge (" + std::to_string(u) + "," +
             std::to_string(v) + ")";

  double max_finish = 0.0;
  for (int i = 0; i < n; ++i) {
    if (s.start[i] < -kCapacityEps) return "negative start time";
    max_finish = std::max(max_finish, s.start[i] + g.node(i).runtime);
  }
  if (std::abs(max_finish - s.makespan) > 1e-9) return "makespan does not match starts";

  std::vector<double> events;
  for (int i = 0; i < n; ++i) {
    events.push_back(s.start[i]);
    events.push_back(s.start[i] + g.node(i).runtime);
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  auto usage_at = [&](double t) {
    double u = 0.0;
    for (int i = 0; i < n; ++i)
      if (s.start[i] <= t && t < s.start[i] + g.node(i).runtime) u += g.node(i).resource;
    return u;
  };

  for (double t : events) {
    const double used = usage_at(t);
    if (used > kCapacity + kCapacityEps)
      return "capacity exceeded (" + std::to_string(used) + ") at t=" + std::to_string(t);
    // Work conservation: no unstarted node may be ready and fitting here.
    for (int v = 0; v < n; ++v) {
      if (s.start[v] <= t + 1e-12) continue;
      bool ready = true;
      for (int p : g.parents(v))
        if (s.start[p] + g.node(p).runtime > t + 1e-12) {
          ready = false;
          break;
        }
      if (ready && g.node(v).resource <= kCapacity - used + kCapacityEps)
        return "node " + std::to_string(v) + " idles while ready and fitting at t=" +
               std::to_string(t);
    }
  }
  return {};
}

BruteForceResult brute_force_optimum(const DagGraph& g) {
  std::vector<int> ids;
  for (int i = 0; i < g.node_count(); ++i)
    if (!g.is_virtual_root(i)) ids.push_back(i);

  BruteForceResult best;
  best.makespan = std::numeric_limits<double>::infinity();
  std::sort(ids.begin(), ids.end());
  do {
    std::vector<int> order;
    if (g.virtual_root()) order.push_back(*g.virtual_root());
    order.insert(order.end(), ids.begin(), ids.end());
    const double ms = makespan(g, PriorityRule::fixed(order));
    if (ms < best.makespan) {
      best.makespan = ms;
      best.order = order;
    }
  } while (std::next_permutation(ids.begin(), ids.end()));
  return best;
}

std::optional<BestEdge> best_single_edge(const DagGraph& g, const PriorityRule& rule) {
  std::optional<BestEdge> best;
  double second = std::numeric_limits<double>::infinity();
  for (int u = 0; u < g.node_count(); ++u)
    for (int v = 0; v < g.node_count(); ++v) {
      if (u == v) continue;
      if (is_conflicting(g, EdgeAction{u, v})) continue;
      const double ms = makespan(add_edge(g, EdgeAction{u, v}), rule);
      if (!best || ms < best->makespan) {
        if (best) second = best->makespan;
        best = BestEdge{EdgeAction{u, v}, ms, false};
      } else {
        second = std::min(second, ms);
      }
    }
  if (best) best->unique = best->makespan < second - 1e-12;
  return best;
}

BitMatrix reachability_by_dfs(const DagGraph& g) {
  const int n = g.node_count();
  BitMatrix r(n);
  for (int src = 0; src < n; ++src) {
    std::vector<int> stack{src};
    std::vector<char> seen(n, 0);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int c : g.children(u))
        if (!seen[c]) {
          seen[c] = 1;
          r.set(src, c);
          stack.push_back(c);
        }
    }
  }
  return r;
}

GradCheck finite_diff_check(ParamStore& params, const std::function<double()>& eval,
                            double h, double denom_floor) {
  denom_floor = std::max(denom_floor, 1e-4);  // below this, quotient roundoff
                                              // dominates any relative claim
  GradCheck out;
  for (int p = 0; p < params.count(); ++p) {
    Param& param = params.at(p);
    for (std::size_t k = 0; k < param.value.size(); ++k) {
      const double saved = param.value.data()[k];
      auto fd_at = [&](double step) {
        param.value.data()[k] = saved + step;
        const double up = eval();
        param.value.data()[k] = saved - step;
        const double down = eval();
        param.value.data()[k] = saved;
        return (up - down) / (2.0 * step);
      };
      const double fd = fd_at(h);
      const double fd_fine = fd_at(h / 2.0);
      // The objective is piecewise smooth in each weight; when the two
      // quotients disagree a rectifier boundary sits inside the stencil and
      // the quotient is not a valid derivative estimate there.
      if (std::abs(fd - fd_fine) >
          1e-4 * std::max({std::abs(fd), std::abs(fd_fine), denom_floor})) {
        ++out.skipped_kinks;
        continue;
      }
      const double ad = param.grad.data()[k];
      const double rel =
          std::abs(ad - fd) / std::max({std::abs(ad), std::abs(fd), denom_floor});
      out.max_rel_err = std::max(out.max_rel_err, rel);
      ++out.checked;
    }
  }
  return out;
}

std::unordered_map<std::string, double> assignment_from_schedule(
    const MilpModel& m, const DagGraph& g, const Schedule& s) {
  std::unordered_map<std::string, double> v;
  const int n = int(m.task_node_ids.size());
  auto start = [&](int task) { return s.start[m.task_node_ids[task]]; };
  auto runtime = [&](int task) { return g.node(m.task_node_ids[task]).runtime; };

  v["T"] = s.makespan;
  for (int i = 0; i < n; ++i) v["s_" + std::to_string(i)] = start(i);

  for (const MilpVariable& var : m.vars) {
    if (!var.binary) continue;
    // names: y_i_j / z_i_j / u_i_j
    const char kind = var.name[0];
    const std::size_t u1 = var.name.find('_');
    const std::size_t u2 = var.name.find('_', u1 + 1);
    const int i = std::stoi(var.name.substr(u1 + 1, u2 - u1 - 1));
    const int j = std::stoi(var.name.substr(u2 + 1));
    const bool i_before_j_end = start(i) < start(j) + runtime(j) - 1e-12;
    // Only y_i_j with i < j exists; the reversed direction is 1 - y_i_j, so
    // consistency demands a strict comparison for the higher-index side.
    const bool i_after_j = i < j ? start(i) >= start(j) : start(i) > start(j);
    switch (kind) {
      case 'y': v[var.name] = i_after_j ? 1.0 : 0.0; break;
      case 'z': v[var.name] = i_before_j_end ? 1.0 : 0.0; break;
      case 'u': v[var.name] = (i_after_j && i_before_j_end) ? 1.0 : 0.0; break;
      default: throw std::logic_error("unexpected binary " + var.name);
    }
  }
  return v;
}

std::string check_assignment(const MilpModel& m,
                             const std::unordered_map<std::string, double>& values,
                             double tol, bool require_integral) {
  auto value_of = [&](int var) {
    auto it = values.find(m.vars[var].name);
    if (it == values.end())
      throw std::invalid_argument("assignment missing " + m.vars[var].name);
    return it->second;
  };
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    const double v = value_of(int(i));
    if (v < m.vars[i].lb - tol || v > m.vars[i].ub + tol)
      return "bound violated for " + m.vars[i].name;
    if (require_integral && m.vars[i].binary &&
        std::abs(v - std::round(v)) > tol)
      return "non-integral binary " + m.vars[i].name;
  }
  for (const MilpConstraint& c : m.cons) {
    double lhs = 0.0;
    for (const MilpTerm& t : c.terms) lhs += t.coef * value_of(t.var);
    if (lhs > c.rhs + tol)
      return "constraint " + c.name + " violated: " + std::to_string(lhs) + " > " +
             std::to_string(c.rhs);
  }
  return {};
}

std::string validate_start_times(const DagGraph& g, const std::vector<double>& start) {
  for (auto [u, v] : g.edges())
    if (start[u] + g.node(u).runtime > start[v] + 1e-6)
      return "precedence violated on (" + std::to_string(u) + "," + std::to_string(v) + ")";
  for (int i = 0; i < g.node_count(); ++i) {
    double used = 0.0;
    for (int j = 0; j < g.node_count(); ++j)
      if (start[j] <= start[i] + 1e-9 &&
          start[i] < start[j] + g.node(j).runtime - 1e-9)
        used += g.node(j).resource;
    if (used > kCapacity + 1e-6)
      return "capacity exceeded at start of node " + std::to_string(i);
  }
  return {};
}

std::optional<EdgeImprovement> find_edge_improvement(Rng& rng, int attempts, int nodes) {
  GenConfig cfg;
  cfg.min_nodes = nodes;
  cfg.max_nodes = nodes;
  cfg.expected_out_degree = 1.0;  // sparse graphs leave room for useful edges
  for (int a = 0; a < attempts; ++a) {
    DagGraph g = generate_dag(rng, cfg);
    const double sjf0 = makespan(g, PriorityRule::sjf());
    const double cp0 = makespan(g, PriorityRule::cp());
    for (int u = 0; u < g.node_count(); ++u)
      for (int v = 0; v < g.node_count(); ++v) {
        if (u == v || is_conflicting(g, EdgeAction{u, v})) continue;
        DagGraph g2 = add_edge(g, EdgeAction{u, v});
        const double sjf1 = makespan(g2, PriorityRule::sjf());
        const double cp1 = makespan(g2, PriorityRule::cp());
        if (sjf1 < sjf0 - 1e-9 && cp1 < cp0 - 1e-9)
          return EdgeImprovement{g, EdgeAction{u, v}, sjf0, sjf1, cp0, cp1};
      }
  }
  return std::nullopt;
}

}  // namespace dagsched::testing
