#include "dagsched/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "dagsched/milp.hpp"
#include "dagsched/textio.hpp"

namespace dagsched {

namespace fs = std::filesystem;

namespace {

std::string pad(int v, std::size_t width) {
  std::string s = std::to_string(v);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

double reduce_pct(double base, double learned) {
  return base > 0.0 ? (base - learned) / base * 100.0 : 0.0;
}

std::string cell_text(double v) { return fmt_double(v); }

}  // namespace

BenchTable run_table(const std::vector<Bucket>& buckets, Model* model,
                     const BenchOptions& opt) {
  BenchTable out;
  for (const PriorityRule& r : opt.rules) out.rule_names.push_back(rule_name(r));
  const int hops = (model && opt.hops < 0) ? model->cfg.hops : opt.hops;

  for (const Bucket& b : buckets) {
    BenchRow row;
    row.bucket = b.name;
    row.num_dags = b.num_dags;

    for (const PriorityRule& rule : opt.rules) {
      BenchCell cell;
      double base_sum = 0.0, learn_sum = 0.0;
      for (const DagGraph& g : b.instances) {
        const double base = makespan(g, rule);
        base_sum += base;
        learn_sum += model
                         ? ensemble_best(g, rule, opt.m_max, opt.beam, *model, hops)
                               .makespan
                         : base;
      }
      cell.time = base_sum / double(b.instances.size());
      cell.learn = learn_sum / double(b.instances.size());
      cell.reduce_pct = reduce_pct(cell.time, cell.learn);
      row.cells.push_back(cell);
    }

    double tetris_sum = 0.0;
    for (const DagGraph& g : b.instances) tetris_sum += makespan(g, PriorityRule::tetris());
    row.tetris = tetris_sum / double(b.instances.size());

    if (!opt.lp_dir.empty() && b.num_dags <= opt.lp_max_dags) {
      double lp_sum = 0.0;
      bool complete = true;
      for (std::size_t k = 0; k < b.instances.size() && complete; ++k) {
        const fs::path sol_path =
            fs::path(opt.lp_dir) / (b.name + "_instance_" + pad(int(k), 2) + ".sol");
        if (!fs::exists(sol_path)) {
          complete = false;
          break;
        }
        auto sol = read_solution(read_text_file(sol_path.string()));
        lp_sum += makespan(b.instances[k], order_from_solution(sol, b.instances[k]));
      }
      if (complete) row.lp_order = lp_sum / double(b.instances.size());
    }
    out.rows.push_back(std::move(row));
  }

  // Unweighted mean over bucket rows; LP column averaged only when present
  // everywhere it applies.
  BenchRow avg;
  avg.bucket = "average";
  avg.cells.assign(out.rule_names.size(), BenchCell{});
  if (!out.rows.empty()) {
    double lp_sum = 0.0;
    int lp_count = 0;
    bool lp_all = true;
    for (const BenchRow& r : out.rows) {
      for (std::size_t c = 0; c < r.cells.size(); ++c) {
        avg.cells[c].time += r.cells[c].time;
        avg.cells[c].learn += r.cells[c].learn;
      }
      avg.tetris += r.tetris;
      if (r.lp_order) {
        lp_sum += *r.lp_order;
        ++lp_count;
      } else if (r.num_dags <= opt.lp_max_dags) {
        lp_all = false;
      }
    }
    const double n = double(out.rows.size());
    for (BenchCell& c : avg.cells) {
      c.time /= n;
      c.learn /= n;
      c.reduce_pct = reduce_pct(c.time, c.learn);
    }
    avg.tetris /= n;
    if (lp_count > 0 && lp_all) avg.lp_order = lp_sum / double(lp_count);
  }
  out.average = std::move(avg);
  return out;
}

namespace {

void table_row_csv(std::string& out, const BenchRow& r) {
  out += r.bucket;
  for (const BenchCell& c : r.cells)
    out += "," + cell_text(c.time) + "," + cell_text(c.learn) + "," +
           cell_text(c.reduce_pct);
  out += "," + cell_text(r.tetris);
  out += ",";
  out += r.lp_order ? cell_text(*r.lp_order) : "-";
  out += "\n";
}

}  // namespace

std::string table_to_csv(const BenchTable& t) {
  std::string out = "bucket";
  for (const std::string& rn : t.rule_names)
    out += "," + rn + "_time," + rn + "_learn," + rn + "_reduce_pct";
  out += ",tetris_time,lp_order_time\n";
  for (const BenchRow& r : t.rows) table_row_csv(out, r);
  table_row_csv(out, t.average);
  return out;
}

std::string table_to_text(const BenchTable& t) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"bucket"};
  for (const std::string& rn : t.rule_names) {
    header.push_back(rn + " time");
    header.push_back(rn + " learn");
    header.push_back(rn + " reduce%");
  }
  header.push_back("tetris");
  header.push_back("lp-order");
  grid.push_back(header);

  auto push_row = [&](const BenchRow& r) {
    std::vector<std::string> row{r.bucket};
    char buf[64];
    for (const BenchCell& c : r.cells) {
      snprintf(buf, sizeof buf, "%.2f", c.time);
      row.push_back(buf);
      snprintf(buf, sizeof buf, "%.2f", c.learn);
      row.push_back(buf);
      snprintf(buf, sizeof buf, "%.2f%%", c.reduce_pct);
      row.push_back(buf);
    }
    snprintf(buf, sizeof buf, "%.2f", r.tetris);
    row.push_back(buf);
    if (r.lp_order) {
      snprintf(buf, sizeof buf, "%.2f", *r.lp_order);
      row.push_back(buf);
    } else {
      row.push_back("-");
    }
    grid.push_back(std::move(row));
  };
  for (const BenchRow& r : t.rows) push_row(r);
  push_row(t.average);

  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  std::string out;
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      cell.resize(width[c], ' ');
      out += cell;
      if (c + 1 < row.size()) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
  }
  return out;
}

SweepResult sweep_edges(const std::vector<Bucket>& buckets, Model& model,
                        const PriorityRule& rule, int m_max, int beam, int hops) {
  if (m_max < 1) throw std::invalid_argument("sweep_edges: m_max must be >= 1");
  if (hops < 0) hops = model.cfg.hops;
  SweepResult out;
  out.reduce_pct.assign(std::size_t(m_max), {});
  out.per_instance_csv = "bucket,instance,m,makespan,reduce_pct\n";

  for (const Bucket& b : buckets) {
    out.bucket_names.push_back(b.name);
    // makespans[m][k]: instance k with exactly m added edges (prefix walk)
    std::vector<std::vector<double>> ms(std::size_t(m_max) + 1,
                                        std::vector<double>(b.instances.size()));
    for (std::size_t k = 0; k < b.instances.size(); ++k) {
      DagGraph current = b.instances[k];
      ms[0][k] = makespan(current, rule);
      for (int m = 1; m <= m_max; ++m) {
        DagGraph next = infer_edges(current, 1, beam, model, hops);
        // no legal action left: later prefixes equal the current graph
        ms[std::size_t(m)][k] =
            next.edges().size() == current.edges().size() ? ms[std::size_t(m) - 1][k]
                                                          : makespan(next, rule);
        current = std::move(next);
      }
      for (int m = 0; m <= m_max; ++m)
        out.per_instance_csv += b.name + "," + std::to_string(k) + "," +
                                std::to_string(m) + "," + fmt_double(ms[std::size_t(m)][k]) +
                                "," +
                                fmt_double(reduce_pct(ms[0][k], ms[std::size_t(m)][k])) +
                                "\n";
    }
    double base_mean = 0.0;
    for (double v : ms[0]) base_mean += v;
    base_mean /= double(b.instances.size());
    double best = 0.0;
    for (int m = 1; m <= m_max; ++m) {
      double mean = 0.0;
      for (double v : ms[std::size_t(m)]) mean += v;
      mean /= double(b.instances.size());
      const double pct = reduce_pct(base_mean, mean);
      out.reduce_pct[std::size_t(m) - 1].push_back(pct);
      best = std::max(best, pct);
    }
    out.ensemble_pct.push_back(best);
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& s) {
  std::string out = "m";
  for (const std::string& b : s.bucket_names) out += "," + b;
  out += "\n";
  for (std::size_t m = 0; m < s.reduce_pct.size(); ++m) {
    out += std::to_string(m + 1);
    for (double v : s.reduce_pct[m]) out += "," + fmt_double(v);
    out += "\n";
  }
  out += "ensemble";
  for (double v : s.ensemble_pct) out += "," + fmt_double(v);
  out += "\n";
  return out;
}

std::string smooth_convergence_csv(const std::string& csv_text, int window) {
  if (window < 1) throw std::invalid_argument("smooth window must be >= 1");
  std::istringstream in(csv_text);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty convergence log", 1);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    std::string label;
    bool first = true;
    while (std::getline(ls, cell, ',')) {
      if (first) {
        label = cell;
        first = false;
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("bad numeric cell '" + cell + "'", lineno);
      }
    }
    if (first) throw ParseError("missing iteration column", lineno);
    if (!rows.empty() && row.size() != rows[0].size())
      throw ParseError("ragged row", lineno);
    labels.push_back(label);
    rows.push_back(std::move(row));
  }

  std::string out = header + "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t lo = i + 1 >= std::size_t(window) ? i + 1 - window : 0;
    out += labels[i];
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      double sum = 0.0;
      for (std::size_t r = lo; r <= i; ++r) sum += rows[r][c];
      out += "," + fmt_double(sum / double(i - lo + 1));
    }
    out += "\n";
  }
  return out;
}

}  // namespace dagsched
