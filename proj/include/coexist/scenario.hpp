#pragma once

// Reduced four-variable coexistence model over mean human viability H, AI
// developmental state A, governance / social legitimacy g and conflict
// burden C:
//
//   dH = r_H H (1 - H/K_H) + mu_H H A / (h_sat + A) - kappa_H C H
//   dA = r_A A (1 - A/K_A) + mu_A A H / (h_sat + H) - g_brake g A - kappa_A C A
//   dg = g_gain H (g_cap - g) - g_decay g
//   dC = c_0 + c_asym |A - H| - (d_C g + d_C0) C
//
// plus presets, shocks and the four summary metrics.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/ode.hpp"
#include "coexist/trajectory.hpp"

namespace coexist {

struct ReducedState {
  double H = 0.0;
  double A = 0.0;
  double g = 0.0;
  double C = 0.0;

  Vec to_vector() const;
  static ReducedState from_vector(const Vec& v);
  bool operator==(const ReducedState&) const = default;
};

struct ReducedParameters {
  double r_H = 1.0, r_A = 1.0;
  double K_H = 1.0, K_A = 1.0;
  double mu_H = 0.0, mu_A = 0.0;
  double h_sat = 1.0;
  double c_asym = 0.0, c_0 = 0.0;
  double d_C = 0.0, d_C0 = 0.0;
  double kappa_H = 0.0, kappa_A = 0.0;
  double g_gain = 0.0, g_decay = 0.0, g_cap = 1.0;
  double g_brake = 0.0;

  // Throws DomainError naming the first violated constraint.
  void validate() const;
  bool operator==(const ReducedParameters&) const = default;
};

inline constexpr std::array<std::string_view, 17> kReducedParameterNames = {
    "r_H", "r_A",     "K_H",     "K_A",    "mu_H",    "mu_A",  "h_sat",  "c_asym", "c_0",
    "d_C", "d_C0",    "kappa_H", "kappa_A", "g_gain", "g_decay", "g_cap", "g_brake"};

// Named access for sweeps and configuration. Throws DomainError for an
// unknown name.
double& parameter_ref(ReducedParameters& p, std::string_view name);
double parameter_value(const ReducedParameters& p, std::string_view name);

struct ScenarioPreset {
  std::string name;
  ReducedParameters params;
  ReducedState initial;
  double horizon = 100.0;
  bool operator==(const ScenarioPreset&) const = default;
};

// Built-in immutable presets: "baseline", "no_governance", "over_governance".
const ScenarioPreset& preset(std::string_view name);
std::vector<std::string> preset_names();

enum class ShockKind { Trust, Physical, Governance };
std::string to_string(ShockKind kind);
ShockKind shock_kind_from_string(std::string_view s);

// How trust shocks act. ReduceViability scales H like a physical shock;
// SuppressMutualism scales mu_H for `trust_suppression_duration`.
enum class TrustShockMode { ReduceViability, SuppressMutualism };

struct Shock {
  double time = 0.0;
  ShockKind kind = ShockKind::Trust;
  double magnitude = 0.5;
  bool operator==(const Shock&) const = default;
};

struct MetricSettings {
  double C_ref = 1.0;
  double tail_fraction = 0.1;
  double band = 0.02;
  double dwell = 5.0;
  double pre_window = 10.0;
  bool operator==(const MetricSettings&) const = default;
};

struct Normalizers {
  double H_ref = 1.0, A_ref = 1.0, g_ref = 1.0, C_ref = 1.0;
  static Normalizers from(const ReducedParameters& p, const MetricSettings& m);
};

enum class RecoveryKind { NotApplicable, PostShock, Settling };
std::string to_string(RecoveryKind kind);

struct MetricsRecord {
  double coexistence_index = 0.0;
  double domination_index = 0.0;
  double conflict_burden = 0.0;
  std::optional<double> recovery_time;
  RecoveryKind recovery_kind = RecoveryKind::NotApplicable;
  bool operator==(const MetricsRecord&) const = default;
};

// Dormand-Prince with max step 0.05 so recovery and dwell windows are
// resolved finely.
IntegratorControls default_scenario_integrator();

struct ScenarioOptions {
  IntegratorControls integrator = default_scenario_integrator();
  MetricSettings metrics;
  TrustShockMode trust_mode = TrustShockMode::ReduceViability;
  double trust_suppression_duration = 10.0;
};

struct ScenarioRun {
  Trajectory trajectory;  // states are (H, A, g, C); J_values the instantaneous score
  MetricsRecord metrics;
};

// Rate vector (dH, dA, dg, dC). Throws DomainError on a negative state.
std::array<double, 4> reduced_rhs(const ReducedState& state, const ReducedParameters& params);

// Throws DomainError unless magnitude is in (0, 1].
ReducedState apply_shock(const ReducedState& state, ShockKind kind, double magnitude);

double instantaneous_score(const ReducedState& state, const Normalizers& n);

double coexistence_index(const Trajectory& traj, const Normalizers& n, double tail_fraction = 0.1);
double domination_index(const Trajectory& traj, const Normalizers& n, double tail_fraction = 0.1);
double conflict_burden(const Trajectory& traj);

// Duration after shock_time until the score enters and stays within `band`
// of its pre-shock average for `dwell` time units. nullopt when that never
// happens inside the trajectory. Throws DomainError when shock_time lies
// outside the trajectory.
std::optional<double> recovery_time(const Trajectory& traj, double shock_time, double pre_window,
                                    double band = 0.02, double dwell = 5.0);

// Recovery after the first shock event in the trajectory; nullopt without
// a shock.
std::optional<double> recovery_after_first_shock(const Trajectory& traj,
                                                 const MetricSettings& settings);

// Unshocked runs: time after which the score stays within `band` of its
// terminal value until the end of the trajectory.
std::optional<double> settling_time(const Trajectory& traj, double band = 0.02);

MetricsRecord compute_metrics(const Trajectory& traj, const ReducedParameters& params,
                              const MetricSettings& settings, bool shocked);

// Integrates the preset, applying shocks at their scheduled times. On an
// integrator failure the IntegrationError carries the partial solution.
ScenarioRun run_scenario(const ScenarioPreset& preset, const std::vector<Shock>& shocks = {},
                         const ScenarioOptions& options = {});

}  // namespace coexist
