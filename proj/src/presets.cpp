#include <algorithm>

#include "coexist/error.hpp"
#include "coexist/scenario.hpp"

namespace coexist {

namespace {

// Calibrated once by a coarse grid search; keep in sync with presets/*.json.
ScenarioPreset make_baseline() {
  ScenarioPreset p;
  p.name = "baseline";
  auto& q = p.params;
  q.r_H = 1.0;
  q.r_A = 0.7;
  q.K_H = 1.0;
  q.K_A = 1.0;
  q.mu_H = 0.9;
  q.mu_A = 0.6;
  q.h_sat = 0.4;
  q.c_asym = 1.3;
  q.c_0 = 0.01;
  q.d_C = 4.5;
  q.d_C0 = 0.05;
  q.kappa_H = 4.75;
  q.kappa_A = 0.03;
  q.g_gain = 0.7;
  q.g_decay = 0.01;
  q.g_cap = 1.0;
  q.g_brake = 0.1;
  p.initial = ReducedState{0.35, 0.15, 0.3, 0.15};
  p.horizon = 100.0;
  return p;
}

ScenarioPreset make_no_governance() {
  ScenarioPreset p = make_baseline();
  p.name = "no_governance";
  p.params.g_gain = 0.0;
  p.initial.g = 0.0;
  return p;
}

ScenarioPreset make_over_governance() {
  ScenarioPreset p = make_baseline();
  p.name = "over_governance";
  p.params.g_brake = 0.85;
  return p;
}

const std::vector<ScenarioPreset>& all_presets() {
  static const std::vector<ScenarioPreset> presets = {make_baseline(), make_no_governance(),
                                                      make_over_governance()};
  return presets;
}

}  // namespace

const ScenarioPreset& preset(std::string_view name) {
  const auto& all = all_presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const auto& p) { return p.name == name; });
  if (it == all.end()) throw DomainError("unknown preset '" + std::string(name) + "'");
  return *it;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : all_presets()) out.push_back(p.name);
  return out;
}

}  // namespace coexist
