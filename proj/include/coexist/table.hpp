#pragma once

// Tabular outputs. Every result file is built as a Table and written either
// as CSV (numbers with 17 significant digits, "NA" for missing values) or
// as a JSON array of row objects (null for missing values).

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "coexist/experiments.hpp"
#include "coexist/trajectory.hpp"
#include "coexist/verify.hpp"

namespace coexist {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

Cell optional_cell(const std::optional<double>& v);

// "%.17g"; non-finite values are written as NA.
std::string format_number(double v);

std::string to_csv(const Table& t);
std::string to_json_text(const Table& t);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const Table& t, const std::filesystem::path& path);
void write_json(const Table& t, const std::filesystem::path& path);

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvData read_csv(const std::filesystem::path& path);
CsvData parse_csv(const std::string& text);

// Columns t,H,A,G,C,J for reduced runs.
Table reduced_trajectory_table(const Trajectory& traj);
// Columns t,x_0..x_{dim-1},J for full-model runs.
Table full_trajectory_table(const Trajectory& traj, int dim);

// Reduced layout without full_dim, full-model layout otherwise.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path,
                          std::optional<int> full_dim = std::nullopt);

Table grid_table(const BasinGrid& grid);
void write_grid_csv(const BasinGrid& grid, const std::filesystem::path& path);

Table basin_summary_table(const BasinSummary& summary);

// Columns scenario,coexistence_index,domination_index,conflict_burden,
// recovery_time,recovery_kind.
Table scenario_summary_table(const std::vector<std::pair<std::string, MetricsRecord>>& rows);

// Long format metric,parameter,importance,rank; importance NA if undefined.
Table sensitivity_table(const SensitivityReport& report);
Table sensitivity_samples_table(const SensitivityReport& report);

Table oat_table(const std::string& parameter, const std::vector<OatPoint>& points);

struct ShockRecord {
  std::string scenario;
  Shock shock;
  MetricsRecord metrics;
  Trajectory trajectory;
};

Table shock_summary_table(const std::vector<ShockRecord>& records);
Table shock_trajectory_table(const std::vector<ShockRecord>& records);

Table verify_table(const std::vector<CheckResult>& checks);

}  // namespace coexist
