#include "coexist/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "coexist/error.hpp"
#include "coexist/parallel.hpp"

namespace coexist {

std::string to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::Coexistence: return "coexistence";
    case RegimeLabel::AiDomination: return "ai_domination";
    case RegimeLabel::LowBenefitLockin: return "low_benefit_lockin";
    case RegimeLabel::Failed: return "failed";
  }
  return "failed";
}

RegimeLabel regime_from_string(std::string_view s) {
  if (s == "coexistence") return RegimeLabel::Coexistence;
  if (s == "ai_domination") return RegimeLabel::AiDomination;
  if (s == "low_benefit_lockin") return RegimeLabel::LowBenefitLockin;
  if (s == "failed") return RegimeLabel::Failed;
  throw DomainError("unknown regime label '" + std::string(s) + "'");
}

RegimeLabel classify_regime(const MetricsRecord& m, const RegimeThresholds& th) {
  if (m.domination_index > th.domination) return RegimeLabel::AiDomination;
  if (m.coexistence_index >= th.coexistence) return RegimeLabel::Coexistence;
  return RegimeLabel::LowBenefitLockin;
}

std::vector<double> linear_axis(double lo, double hi, int points) {
  if (points < 2) throw DomainError("an axis needs at least two points");
  if (!(hi > lo)) throw DomainError("axis bounds must be increasing");
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    axis[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return axis;
}

BasinGrid basin_sweep(const ScenarioPreset& preset, const BasinSettings& s,
                      const ScenarioOptions& options, const RegimeThresholds& thresholds,
                      unsigned threads) {
  BasinGrid grid;
  grid.a0_values = linear_axis(s.a0_min, s.a0_max, s.a0_points);
  grid.g0_values = linear_axis(s.g0_min, s.g0_max, s.g0_points);
  const std::size_t na = grid.a0_values.size(), ng = grid.g0_values.size();
  grid.cells.resize(na * ng);

  parallel_for(na * ng, threads, [&](std::size_t idx) {
    ScenarioPreset cell = preset;
    cell.initial = ReducedState{s.H0_fraction * preset.params.K_H, grid.a0_values[idx / ng],
                                grid.g0_values[idx % ng], s.C0_fraction * options.metrics.C_ref};
    BasinCell& out = grid.cells[idx];
    try {
      out.metrics = run_scenario(cell, {}, options).metrics;
      out.label = classify_regime(out.metrics, thresholds);
    } catch (const NumericalError& e) {
      out.label = RegimeLabel::Failed;
      out.failure = e.what();
    }
  });
  return grid;
}

const RegimeSummary& BasinSummary::of(RegimeLabel label) const {
  for (const auto& r : regimes)
    if (r.label == label) return r;
  throw DomainError("no summary for regime " + to_string(label));
}

BasinSummary summarize_basins(const BasinGrid& grid) {
  BasinSummary out;
  for (RegimeLabel l : {RegimeLabel::Coexistence, RegimeLabel::AiDomination, RegimeLabel::LowBenefitLockin})
    out.regimes.push_back(RegimeSummary{l});
  std::size_t ok = 0;
  for (const auto& cell : grid.cells) {
    if (cell.label == RegimeLabel::Failed) {
      ++out.failed;
      continue;
    }
    ++ok;
    for (auto& r : out.regimes) {
      if (r.label != cell.label) continue;
      ++r.count;
      r.mean_coexistence += cell.metrics.coexistence_index;
      r.mean_domination += cell.metrics.domination_index;
      r.mean_conflict += cell.metrics.conflict_burden;
    }
  }
  for (auto& r : out.regimes) {
    if (r.count > 0) {
      const double c = static_cast<double>(r.count);
      r.mean_coexistence /= c;
      r.mean_domination /= c;
      r.mean_conflict /= c;
    }
    r.fraction = ok > 0 ? static_cast<double>(r.count) / static_cast<double>(ok) : 0.0;
  }
  return out;
}

bool domination_is_upset_in_a0(const BasinGrid& grid) {
  for (std::size_t ig = 0; ig < grid.g0_values.size(); ++ig) {
    bool dominated = false;
    for (std::size_t ia = 0; ia < grid.a0_values.size(); ++ia) {
      const bool d = grid.at(ia, ig).label == RegimeLabel::AiDomination;
      if (dominated && !d) return false;
      dominated = dominated || d;
    }
  }
  return true;
}

std::vector<std::vector<double>> latin_hypercube(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> design(n, std::vector<double>(k));
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < k; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    // Explicit Fisher-Yates: std::shuffle's algorithm is implementation-defined.
    for (std::size_t i = n; i > 1; --i) {
      const auto r = static_cast<std::size_t>(rng() % i);
      std::swap(perm[i - 1], perm[r]);
    }
    for (std::size_t i = 0; i < n; ++i)
      design[i][j] = (static_cast<double>(perm[i]) + unif(rng)) / static_cast<double>(n);
  }
  return design;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("spearman inputs differ in length");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::string> SensitivityReport::ranking(const std::string& metric) const {
  const auto it = std::find(metrics.begin(), metrics.end(), metric);
  if (it == metrics.end()) throw DomainError("unknown metric '" + metric + "'");
  const auto& imp = importance[static_cast<std::size_t>(it - metrics.begin())];
  if (!imp) return {};
  std::vector<std::size_t> order(parameters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return (*imp)[a] > (*imp)[b]; });
  std::vector<std::string> out;
  for (std::size_t i : order) out.push_back(parameters[i]);
  return out;
}

SensitivityReport global_sensitivity(const SampleModel& model, const std::vector<ParameterRange>& ranges,
                                     const std::vector<std::string>& metric_names,
                                     std::size_t n_samples, std::uint64_t seed, unsigned threads) {
  if (ranges.empty()) throw DomainError("sensitivity needs at least one parameter range");
  for (const auto& r : ranges)
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.hi > r.lo))
      throw DomainError("sampling interval for " + r.name + " must be finite and nonempty");
  if (n_samples < 2) throw DomainError("sensitivity needs at least two samples");

  SensitivityReport rep;
  rep.ranges = ranges;
  rep.samples = n_samples;
  rep.seed = seed;
  rep.metrics = metric_names;
  for (const auto& r : ranges) rep.parameters.push_back(r.name);

  const auto design = latin_hypercube(n_samples, ranges.size(), seed);
  rep.parameter_samples.assign(n_samples, std::vector<double>(ranges.size()));
  for (std::size_t i = 0; i < n_samples; ++i)
    for (std::size_t j = 0; j < ranges.size(); ++j)
      rep.parameter_samples[i][j] = ranges[j].lo + design[i][j] * (ranges[j].hi - ranges[j].lo);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.metric_samples.assign(n_samples, std::vector<double>(metric_names.size(), nan));
  parallel_for(n_samples, threads, [&](std::size_t i) {
    try {
      auto values = model(rep.parameter_samples[i]);
      if (values.size() != metric_names.size()) throw DimensionError("sample model returned wrong metric count");
      rep.metric_samples[i] = std::move(values);
    } catch (const NumericalError&) {
      // left as NaN; counted below
    }
  });

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto& m = rep.metric_samples[i];
    if (std::all_of(m.begin(), m.end(), [](double v) { return std::isfinite(v); }))
      ok.push_back(i);
  }
  rep.failures = n_samples - ok.size();

  for (std::size_t m = 0; m < metric_names.size(); ++m) {
    std::vector<double> y;
    for (std::size_t i : ok) y.push_back(rep.metric_samples[i][m]);
    std::vector<double> imp(ranges.size(), 0.0);
    bool defined = true;
    for (std::size_t j = 0; j < ranges.size() && defined; ++j) {
      std::vector<double> x;
      for (std::size_t i : ok) x.push_back(rep.parameter_samples[i][j]);
      const auto rho = spearman(x, y);
      if (!rho) defined = false;
      else imp[j] = std::abs(*rho);
    }
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (!defined || !(total > 0.0)) {
      rep.importance.push_back(std::nullopt);
      continue;
    }
    for (double& v : imp) v /= total;
    rep.importance.push_back(std::move(imp));
  }
  return rep;
}

SensitivityReport global_sensitivity(const ScenarioPreset& preset,
                                     const std::vector<ParameterRange>& ranges,
                                     std::size_t n_samples, std::uint64_t seed,
                                     const ScenarioOptions& options, unsigned threads) {
  if (n_samples < 100) throw DomainError("global sensitivity needs at least 100 samples");
  {
    ReducedParameters probe = preset.params;
    for (const auto& r : ranges) parameter_ref(probe, r.name);  // throws on unknown names
  }
  SampleModel model = [&](const std::vector<double>& values) {
    ScenarioPreset run = preset;
    for (std::size_t j = 0; j < ranges.size(); ++j) parameter_ref(run.params, ranges[j].name) = values[j];
    const MetricsRecord m = run_scenario(run, {}, options).metrics;
    return std::vector<double>{m.coexistence_index, m.domination_index, m.conflict_burden};
  };
  return global_sensitivity(model, ranges, {"coexistence_index", "domination_index", "conflict_burden"},
                            n_samples, seed, threads);
}

std::vector<ParameterRange> default_sensitivity_ranges(const ReducedParameters& params) {
  std::vector<ParameterRange> out;
  for (const char* name : {"mu_H", "mu_A", "c_asym", "g_gain", "g_brake", "c_0", "g_decay", "kappa_A"}) {
    const double v = parameter_value(params, name);
    if (v == 0.0) continue;
    out.push_back(ParameterRange{name, 0.5 * v, 1.5 * v});
  }
  return out;
}

std::vector<OatPoint> oat_sweep(const ScenarioPreset& preset, const std::string& parameter,
                                const std::vector<double>& values, const std::vector<Shock>& shocks,
                                const ScenarioOptions& options, unsigned threads) {
  if (values.empty()) throw DomainError("one-at-a-time sweep needs values");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("sweep values must be finite");
  {
    ReducedParameters probe = preset.params;
    parameter_ref(probe, parameter);
  }
  std::vector<OatPoint> out(values.size());
  parallel_for(values.size(), threads, [&](std::size_t i) {
    ScenarioPreset run = preset;
    parameter_ref(run.params, parameter) = values[i];
    out[i].value = values[i];
    try {
      out[i].metrics = run_scenario(run, shocks, options).metrics;
    } catch (const NumericalError& e) {
      out[i].failure = e.what();
    }
  });
  return out;
}

}  // namespace coexist
