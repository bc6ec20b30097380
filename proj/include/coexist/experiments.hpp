#pragma once

// Experiment suites over the reduced scenario model: basin sweeps with
// regime classification, global (Latin hypercube + rank correlation) and
// one-at-a-time sensitivity. Work items run in parallel and are assembled
// by index, so results do not depend on the thread count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coexist/scenario.hpp"

namespace coexist {

enum class RegimeLabel { Coexistence, AiDomination, LowBenefitLockin, Failed };

std::string to_string(RegimeLabel label);
RegimeLabel regime_from_string(std::string_view s);

struct RegimeThresholds {
  double coexistence = 0.8;  // minimum coexistence index
  double domination = 0.1;   // maximum domination index
  bool operator==(const RegimeThresholds&) const = default;
};

RegimeLabel classify_regime(const MetricsRecord& metrics, const RegimeThresholds& thresholds = {});

struct BasinSettings {
  double a0_min = 0.0, a0_max = 3.0;
  double g0_min = 0.0, g0_max = 1.0;
  int a0_points = 35;
  int g0_points = 35;
  // Fixed initial H and C as fractions of K_H and C_ref.
  double H0_fraction = 0.5;
  double C0_fraction = 0.1;
  bool operator==(const BasinSettings&) const = default;
};

struct BasinCell {
  RegimeLabel label = RegimeLabel::Failed;
  MetricsRecord metrics;
  std::string failure;  // integrator message for failed cells
};

struct BasinGrid {
  std::vector<double> a0_values;
  std::vector<double> g0_values;
  std::vector<BasinCell> cells;  // row-major: a0 outer, g0 inner

  const BasinCell& at(std::size_t ia, std::size_t ig) const {
    return cells[ia * g0_values.size() + ig];
  }
};

// Strictly increasing, evenly spaced axis with `points` >= 2 values.
std::vector<double> linear_axis(double lo, double hi, int points);

BasinGrid basin_sweep(const ScenarioPreset& preset, const BasinSettings& settings,
                      const ScenarioOptions& options = {}, const RegimeThresholds& thresholds = {},
                      unsigned threads = 0);

struct RegimeSummary {
  RegimeLabel label;
  std::size_t count = 0;
  double fraction = 0.0;  // over successful cells
  double mean_coexistence = 0.0;
  double mean_domination = 0.0;
  double mean_conflict = 0.0;
};

struct BasinSummary {
  std::vector<RegimeSummary> regimes;  // coexistence, ai_domination, low_benefit_lockin
  std::size_t failed = 0;
  const RegimeSummary& of(RegimeLabel label) const;
};

BasinSummary summarize_basins(const BasinGrid& grid);

// For each g0 column, the a0 values classified ai_domination form an
// up-set of the a0 axis.
bool domination_is_upset_in_a0(const BasinGrid& grid);

struct ParameterRange {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const ParameterRange&) const = default;
};

// n x k design in [0,1)^k; each column hits every stratum exactly once.
std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t k, std::uint64_t seed);

// Spearman rank correlation with average ranks for ties; nullopt when
// either input has zero variance.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

struct SensitivityReport {
  std::vector<std::string> parameters;
  std::vector<std::string> metrics;
  // importance[m][p]; nullopt for a metric with zero variance.
  std::vector<std::optional<std::vector<double>>> importance;
  std::vector<ParameterRange> ranges;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> parameter_samples;  // [sample][parameter]
  std::vector<std::vector<double>> metric_samples;     // [sample][metric], NaN on failure
  std::size_t failures = 0;

  // Parameters ranked by importance for one metric, most important first.
  std::vector<std::string> ranking(const std::string& metric) const;
};

// Generic engine: evaluates `model` at each Latin hypercube sample (scaled
// into the ranges) and normalizes |Spearman| per metric to sum to one.
using SampleModel = std::function<std::vector<double>(const std::vector<double>& parameters)>;

SensitivityReport global_sensitivity(const SampleModel& model, const std::vector<ParameterRange>& ranges,
                                     const std::vector<std::string>& metric_names,
                                     std::size_t n_samples, std::uint64_t seed, unsigned threads = 0);

// Scenario-model sensitivity over coexistence_index, domination_index and
// conflict_burden. Requires n_samples >= 100.
SensitivityReport global_sensitivity(const ScenarioPreset& preset,
                                     const std::vector<ParameterRange>& ranges,
                                     std::size_t n_samples, std::uint64_t seed,
                                     const ScenarioOptions& options = {}, unsigned threads = 0);

// Default ranges: +-50% around the preset for the eight parameters with the
// strongest stated roles (both mutualism terms, asymmetry conflict,
// governance gain, decay and brake, baseline conflict inflow, conflict
// damage to AI). Parameters that are zero in the preset are left out.
std::vector<ParameterRange> default_sensitivity_ranges(const ReducedParameters& params);

struct OatPoint {
  double value = 0.0;
  std::optional<MetricsRecord> metrics;  // nullopt on integrator failure
  std::string failure;
};

std::vector<OatPoint> oat_sweep(const ScenarioPreset& preset, const std::string& parameter,
                                const std::vector<double>& values, const std::vector<Shock>& shocks = {},
                                const ScenarioOptions& options = {}, unsigned threads = 0);

}  // namespace coexist
