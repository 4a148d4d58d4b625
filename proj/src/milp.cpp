#include "dagsched/milp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dagsched/textio.hpp"

namespace dagsched {

int MilpModel::var_id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::invalid_argument("unknown LP variable: " + name);
  return it->second;
}

int MilpModel::family_count(char family) const {
  int n = 0;
  for (const auto& c : cons) n += (c.family == family);
  return n;
}

namespace {

std::string sv(const char* stem, int i) { return std::string(stem) + std::to_string(i); }
std::string pv(const char* stem, int i, int j) {
  return std::string(stem) + std::to_string(i) + "_" + std::to_string(j);
}

}  // namespace

MilpModel build_milp(const DagGraph& g) {
  MilpModel m;

  // Task list: every non-root node, in id order.
  std::vector<int> node_to_task(g.node_count(), -1);
  for (int id = 0; id < g.node_count(); ++id) {
    if (g.is_virtual_root(id)) continue;
    node_to_task[id] = int(m.task_node_ids.size());
    m.task_node_ids.push_back(id);
  }
  const int n = int(m.task_node_ids.size());

  auto add_var = [&](const std::string& name, bool binary) {
    m.index_[name] = int(m.vars.size());
    MilpVariable v;
    v.name = name;
    v.binary = binary;
    if (binary) v.ub = 1.0;
    m.vars.push_back(std::move(v));
    return m.index_[name];
  };

  const int T = add_var("T", false);
  m.obj_var = T;
  std::vector<int> s(n);
  double total_runtime = 0.0;
  for (int i = 0; i < n; ++i) {
    s[i] = add_var(sv("s_", i), false);
    total_runtime += g.node(m.task_node_ids[i]).runtime;
  }
  const double B = total_runtime + 1.0;
  m.big_m = B;

  auto runtime = [&](int task) { return g.node(m.task_node_ids[task]).runtime; };
  auto resource = [&](int task) { return g.node(m.task_node_ids[task]).resource; };
  auto unrelated = [&](int i, int j) {
    const int u = m.task_node_ids[i], v = m.task_node_ids[j];
    return !g.reaches(u, v) && !g.reaches(v, u);
  };
  auto row = [&](std::string name, char family, std::vector<MilpTerm> terms, double rhs) {
    m.cons.push_back(MilpConstraint{std::move(name), family, std::move(terms), rhs});
  };

  // (a) s_i + t_i <= T
  for (int i = 0; i < n; ++i)
    row(sv("a_", i), 'a', {{1.0, s[i]}, {-1.0, T}}, -runtime(i));

  // (b) s_i + t_i <= s_j for every edge between tasks
  for (auto [u, v] : g.edges()) {
    const int i = node_to_task[u], j = node_to_task[v];
    if (i < 0 || j < 0) continue;  // edges touching the virtual root
    row(pv("b_", i, j), 'b', {{1.0, s[i]}, {-1.0, s[j]}}, -runtime(i));
  }

  // Pair variables and (c)-(h) for each unordered unrelated pair i < j.
  std::vector<std::vector<int>> u_of(n);  // task i -> list of (u var, other task)
  std::vector<std::vector<int>> u_other(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!unrelated(i, j)) continue;
      const int y_ij = add_var(pv("y_", i, j), true);
      const int z_ij = add_var(pv("z_", i, j), true);
      const int z_ji = add_var(pv("z_", j, i), true);
      const int u_ij = add_var(pv("u_", i, j), true);
      const int u_ji = add_var(pv("u_", j, i), true);
      u_of[i].push_back(u_ij);
      u_other[i].push_back(j);
      u_of[j].push_back(u_ji);
      u_other[j].push_back(i);

      // (c) s_i <= s_j + B y_ij ; (d) s_j <= s_i + B (1 - y_ij)
      row(pv("c_", i, j), 'c', {{1.0, s[i]}, {-1.0, s[j]}, {-B, y_ij}}, 0.0);
      row(pv("d_", i, j), 'd', {{1.0, s[j]}, {-1.0, s[i]}, {B, y_ij}}, B);
      // (e) s_j + t_j <= s_i + B z_ij ; (f) s_i <= s_j + t_j + B (1 - z_ij)
      row(pv("e_", i, j), 'e', {{1.0, s[j]}, {-1.0, s[i]}, {-B, z_ij}}, -runtime(j));
      row(pv("f_", i, j), 'f', {{1.0, s[i]}, {-1.0, s[j]}, {B, z_ij}}, runtime(j) + B);
      // same two rows for the reversed direction
      row(pv("e_", j, i), 'e', {{1.0, s[i]}, {-1.0, s[j]}, {-B, z_ji}}, -runtime(i));
      row(pv("f_", j, i), 'f', {{1.0, s[j]}, {-1.0, s[i]}, {B, z_ji}}, runtime(i) + B);
      // (g) y + z - 1 <= B u ; (h) 2 - y - z <= B (1 - u); y_ji == 1 - y_ij
      row(pv("g_", i, j), 'g', {{1.0, y_ij}, {1.0, z_ij}, {-B, u_ij}}, 1.0);
      row(pv("h_", i, j), 'h', {{-1.0, y_ij}, {-1.0, z_ij}, {B, u_ij}}, B - 2.0);
      row(pv("g_", j, i), 'g', {{-1.0, y_ij}, {1.0, z_ji}, {-B, u_ji}}, 0.0);
      row(pv("h_", j, i), 'h', {{1.0, y_ij}, {-1.0, z_ji}, {B, u_ji}}, B - 1.0);
    }

  // (i) sum_j u_ij r_j + r_i <= R, one resource dimension
  for (int i = 0; i < n; ++i) {
    if (u_of[i].empty()) continue;
    std::vector<MilpTerm> terms;
    for (std::size_t k = 0; k < u_of[i].size(); ++k)
      terms.push_back({resource(u_other[i][k]), u_of[i][k]});
    row(sv("i_", i), 'i', std::move(terms), kCapacity - resource(i));
  }

  return m;
}

namespace {

void append_term(std::string& out, bool first, double coef, const std::string& name) {
  if (coef == 0.0) return;
  const double mag = std::abs(coef);
  if (first) {
    if (coef < 0.0) out += "- ";
  } else {
    out += coef < 0.0 ? " - " : " + ";
  }
  if (mag != 1.0) {
    out += fmt_double(mag);
    out += " ";
  }
  out += name;
}

}  // namespace

std::string write_lp(const MilpModel& m, bool relax) {
  std::string out;
  out += "\\ dag scheduling model: " + std::to_string(m.task_node_ids.size()) +
         " tasks, B = " + fmt_double(m.big_m) + "\n";
  out += "Minimize\n obj: " + m.vars[m.obj_var].name + "\n";
  out += "Subject To\n";
  for (const MilpConstraint& c : m.cons) {
    out += " " + c.name + ": ";
    bool first = true;
    for (const MilpTerm& t : c.terms) {
      append_term(out, first, t.coef, m.vars[t.var].name);
      first = false;
    }
    out += " <= " + fmt_double(c.rhs) + "\n";
  }

  std::vector<const MilpVariable*> binaries;
  for (const MilpVariable& v : m.vars)
    if (v.binary) binaries.push_back(&v);

  if (relax && !binaries.empty()) {
    out += "Bounds\n";
    for (const MilpVariable* v : binaries)
      out += " 0 <= " + v->name + " <= 1\n";
  }
  if (!relax && !binaries.empty()) {
    out += "Binaries\n";
    for (const MilpVariable* v : binaries) out += " " + v->name + "\n";
  }
  out += "End\n";
  return out;
}

namespace {

std::unordered_map<std::string, double> read_solution_impl(const std::string& text,
                                                           const MilpModel* model) {
  std::unordered_map<std::string, double> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;  // blank
    double value;
    if (!(ls >> value)) throw ParseError("missing value for '" + name + "'", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
    if (out.count(name)) throw ParseError("duplicate variable '" + name + "'", lineno);
    if (model) {
      try {
        model->var_id(name);
      } catch (const std::invalid_argument&) {
        throw ParseError("unknown variable '" + name + "'", lineno);
      }
    }
    out[name] = value;
  }
  return out;
}

}  // namespace

std::unordered_map<std::string, double> read_solution(const std::string& text) {
  return read_solution_impl(text, nullptr);
}

std::unordered_map<std::string, double> read_solution(const std::string& text,
                                                      const MilpModel& m) {
  return read_solution_impl(text, &m);
}

PriorityRule order_from_solution(const std::unordered_map<std::string, double>& sol,
                                 const DagGraph& g) {
  std::vector<int> order;
  if (g.virtual_root()) order.push_back(*g.virtual_root());

  std::vector<std::pair<double, int>> starts;  // (s_i, node id), task order = id order
  int task = 0;
  for (int id = 0; id < g.node_count(); ++id) {
    if (g.is_virtual_root(id)) continue;
    auto it = sol.find(sv("s_", task));
    if (it == sol.end())
      throw std::invalid_argument("solution is missing variable " + sv("s_", task));
    starts.emplace_back(it->second, id);
    ++task;
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [_, id] : starts) order.push_back(id);
  return PriorityRule::fixed(std::move(order));
}

}  // namespace dagsched
