#pragma once

#include <limits>
#include <unordered_map>

#include "dagsched/schedule.hpp"

namespace dagsched {

struct MilpVariable {
  std::string name;
  double lb = 0.0;
  double ub = std::numeric_limits<double>::infinity();
  bool binary = false;
};

struct MilpTerm {
  double coef = 0.0;
  int var = 0;
};

// Row "sum(terms) <= rhs", tagged with its constraint family letter.
struct MilpConstraint {
  std::string name;
  char family = '?';
  std::vector<MilpTerm> terms;
  double rhs = 0.0;
};

// Makespan-minimization model over the non-root tasks of a DAG.
//
// Variables: T (objective), one start time s_i per task, and per unordered
// pair of tasks where neither reaches the other: y_i_j (task i starts no
// earlier than task j), z_i_j / z_j_i (i starts before j ends / j before i
// ends) and u_i_j / u_j_i (j runs when i starts / i runs when j starts).
// y_j_i is represented as 1 - y_i_j.
//
// Families: (a) s_i + t_i <= T; (b) s_i + t_i <= s_j per edge; (c)-(f) big-M
// forcing of y and z to their order meanings; (g)-(h) u = y AND z; (i) per
// task, the summed resource of tasks running at its start plus its own fits
// the capacity (one resource dimension); binaries are relaxed to [0,1] when
// the LP is written with relax=true.
struct MilpModel {
  std::vector<MilpVariable> vars;
  std::vector<MilpConstraint> cons;
  int obj_var = 0;
  double big_m = 0.0;
  int resource_dims = 1;
  std::vector<int> task_node_ids;  // task index -> node id in the source graph

  int var_id(const std::string& name) const;
  int family_count(char family) const;

 private:
  friend MilpModel build_milp(const DagGraph& g);
  std::unordered_map<std::string, int> index_;
};

// Builds the model with B = sum of runtimes + 1. The virtual root, when
// present, is stripped; its zero-cost node never binds any constraint.
MilpModel build_milp(const DagGraph& g);

// LP text (Minimize / Subject To / Bounds / Binaries / End). relax replaces
// the Binaries section with [0,1] bounds. Output is byte-stable.
std::string write_lp(const MilpModel& m, bool relax);

// Parses "name value" lines (blank lines and # comments skipped); throws
// ParseError with the offending line number. The model-aware overload also
// rejects variable names the model does not define.
std::unordered_map<std::string, double> read_solution(const std::string& text);
std::unordered_map<std::string, double> read_solution(const std::string& text,
                                                      const MilpModel& m);

// Ascending relaxed start times (ties by task index) turned into a
// FixedOrder rule over all node ids of g (virtual root first when present).
PriorityRule order_from_solution(const std::unordered_map<std::string, double>& sol,
                                 const DagGraph& g);

}  // namespace dagsched
