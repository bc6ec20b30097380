#include "coexist/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "coexist/error.hpp"

namespace coexist {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DimensionError("table row width does not match header");
  rows.push_back(std::move(row));
}

Cell optional_cell(const std::optional<double>& v) {
  if (!v) return std::monostate{};
  return *v;
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return "NA"; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
  } visit;
  return std::visit(visit, c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  struct {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  } visit;
  return std::visit(visit, c);
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

Cell metrics_recovery(const MetricsRecord& m) { return optional_cell(m.recovery_time); }

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  std::vector<std::string> header;
  for (const auto& c : t.columns) header.push_back(csv_field(c));
  out += join_row(header) + '\n';
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const Cell& c : row) cells.push_back(cell_text(c));
    out += join_row(cells) + '\n';
  }
  return out;
}

std::string to_json_text(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
    arr.push_back(std::move(o));
  }
  return arr.dump(1) + '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("write failed for " + path.string());
}

void write_csv(const Table& t, const std::filesystem::path& path) { write_text(path, to_csv(t)); }
void write_json(const Table& t, const std::filesystem::path& path) { write_text(path, to_json_text(t)); }

CsvData parse_csv(const std::string& text) {
  CsvData data;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  auto end_row = [&] {
    row.push_back(field);
    field.clear();
    if (data.header.empty() && data.rows.empty() && !any) data.header = row;
    else data.rows.push_back(row);
    any = true;
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      end_row();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) end_row();
  return data;
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

Table reduced_trajectory_table(const Trajectory& traj) {
  Table t{{"t", "H", "A", "G", "C", "J"}, {}};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec& x = traj.states[i];
    if (x.size() != 4) throw DimensionError("reduced trajectory states must have 4 entries");
    t.add_row({traj.times[i], x[0], x[1], x[2], x[3], traj.J_values[i]});
  }
  return t;
}

Table full_trajectory_table(const Trajectory& traj, int dim) {
  Table t;
  t.columns.push_back("t");
  for (int k = 0; k < dim; ++k) t.columns.push_back("x_" + std::to_string(k));
  t.columns.push_back("J");
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec& x = traj.states[i];
    if (x.size() != dim) throw DimensionError("trajectory state dimension does not match header");
    std::vector<Cell> row{traj.times[i]};
    for (int k = 0; k < dim; ++k) row.emplace_back(x[k]);
    row.emplace_back(traj.J_values[i]);
    t.add_row(std::move(row));
  }
  return t;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path, std::optional<int> full_dim) {
  write_csv(full_dim ? full_trajectory_table(traj, *full_dim) : reduced_trajectory_table(traj), path);
}

Table grid_table(const BasinGrid& grid) {
  Table t{{"a0", "g0", "regime", "coexistence_index", "domination_index", "conflict_burden", "recovery_time"}, {}};
  for (std::size_t ia = 0; ia < grid.a0_values.size(); ++ia) {
    for (std::size_t ig = 0; ig < grid.g0_values.size(); ++ig) {
      const BasinCell& c = grid.at(ia, ig);
      if (c.label == RegimeLabel::Failed) {
        t.add_row({grid.a0_values[ia], grid.g0_values[ig], to_string(c.label), std::monostate{}, std::monostate{},
                   std::monostate{}, std::monostate{}});
      } else {
        t.add_row({grid.a0_values[ia], grid.g0_values[ig], to_string(c.label), c.metrics.coexistence_index,
                   c.metrics.domination_index, c.metrics.conflict_burden, metrics_recovery(c.metrics)});
      }
    }
  }
  return t;
}

void write_grid_csv(const BasinGrid& grid, const std::filesystem::path& path) { write_csv(grid_table(grid), path); }

Table basin_summary_table(const BasinSummary& summary) {
  Table t{{"regime", "count", "fraction", "mean_coexistence_index", "mean_domination_index", "mean_conflict_burden"},
          {}};
  for (const auto& r : summary.regimes) {
    if (r.count == 0) {
      t.add_row({to_string(r.label), 0LL, 0.0, std::monostate{}, std::monostate{}, std::monostate{}});
    } else {
      t.add_row({to_string(r.label), static_cast<long long>(r.count), r.fraction, r.mean_coexistence,
                 r.mean_domination, r.mean_conflict});
    }
  }
  t.add_row({to_string(RegimeLabel::Failed), static_cast<long long>(summary.failed), std::monostate{},
             std::monostate{}, std::monostate{}, std::monostate{}});
  return t;
}

Table scenario_summary_table(const std::vector<std::pair<std::string, MetricsRecord>>& rows) {
  Table t{{"scenario", "coexistence_index", "domination_index", "conflict_burden", "recovery_time", "recovery_kind"},
          {}};
  for (const auto& [name, m] : rows)
    t.add_row({name, m.coexistence_index, m.domination_index, m.conflict_burden, metrics_recovery(m),
               to_string(m.recovery_kind)});
  return t;
}

Table sensitivity_table(const SensitivityReport& report) {
  Table t{{"metric", "parameter", "importance", "rank"}, {}};
  for (std::size_t m = 0; m < report.metrics.size(); ++m) {
    const auto ranking = report.ranking(report.metrics[m]);
    for (std::size_t p = 0; p < report.parameters.size(); ++p) {
      const auto& imp = report.importance[m];
      if (!imp) {
        t.add_row({report.metrics[m], report.parameters[p], std::monostate{}, std::monostate{}});
        continue;
      }
      const auto pos = std::find(ranking.begin(), ranking.end(), report.parameters[p]) - ranking.begin();
      t.add_row({report.metrics[m], report.parameters[p], (*imp)[p], static_cast<long long>(pos + 1)});
    }
  }
  return t;
}

Table sensitivity_samples_table(const SensitivityReport& report) {
  Table t;
  t.columns.push_back("sample");
  for (const auto& p : report.parameters) t.columns.push_back(p);
  for (const auto& m : report.metrics) t.columns.push_back(m);
  for (std::size_t i = 0; i < report.parameter_samples.size(); ++i) {
    std::vector<Cell> row{static_cast<long long>(i)};
    for (double v : report.parameter_samples[i]) row.emplace_back(v);
    for (double v : report.metric_samples[i]) row.emplace_back(v);
    t.add_row(std::move(row));
  }
  return t;
}

Table oat_table(const std::string& parameter, const std::vector<OatPoint>& points) {
  Table t{{"parameter", "value", "coexistence_index", "domination_index", "conflict_burden", "recovery_time",
           "recovery_kind"},
          {}};
  for (const auto& p : points) {
    if (!p.metrics) {
      t.add_row({parameter, p.value, std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{},
                 std::string("failed")});
      continue;
    }
    const MetricsRecord& m = *p.metrics;
    t.add_row({parameter, p.value, m.coexistence_index, m.domination_index, m.conflict_burden, metrics_recovery(m),
               to_string(m.recovery_kind)});
  }
  return t;
}

Table shock_summary_table(const std::vector<ShockRecord>& records) {
  Table t{{"scenario", "shock", "time", "magnitude", "coexistence_index", "domination_index", "conflict_burden",
           "recovery_time"},
          {}};
  for (const auto& r : records)
    t.add_row({r.scenario, to_string(r.shock.kind), r.shock.time, r.shock.magnitude, r.metrics.coexistence_index,
               r.metrics.domination_index, r.metrics.conflict_burden, metrics_recovery(r.metrics)});
  return t;
}

Table shock_trajectory_table(const std::vector<ShockRecord>& records) {
  Table t{{"scenario", "shock", "t", "H", "A", "G", "C", "J"}, {}};
  for (const auto& r : records) {
    const Trajectory& traj = r.trajectory;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Vec& x = traj.states[i];
      t.add_row({r.scenario, to_string(r.shock.kind), traj.times[i], x[0], x[1], x[2], x[3], traj.J_values[i]});
    }
  }
  return t;
}

Table verify_table(const std::vector<CheckResult>& checks) {
  Table t{{"check", "status", "trials", "passed_trials", "worst", "tolerance", "statement"}, {}};
  for (const auto& c : checks)
    t.add_row({c.name, std::string(c.pass ? "pass" : "fail"), static_cast<long long>(c.trials),
               static_cast<long long>(c.passed_trials), c.worst, c.tolerance, c.statement});
  return t;
}

}  // namespace coexist
