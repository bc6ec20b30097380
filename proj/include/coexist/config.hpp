#pragma once

// Run configuration: JSON with four sections (model, scenario, experiment,
// output) plus a top-level seed. Every key has a default; unknown keys are
// errors. Loading yields a fully resolved config whose to_json() lists every
// effective value, so saving and reloading reproduces it exactly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coexist/experiments.hpp"
#include "coexist/model.hpp"
#include "coexist/scenario.hpp"

namespace coexist {

struct ProfileConfig {
  std::vector<double> demand;
  std::vector<double> supply;
  bool operator==(const ProfileConfig&) const = default;
};

struct LayerConfig {
  Topology topology = Topology::Complete;
  double weight = 1.0;
  double edge_probability = 0.5;  // random topology only
  bool operator==(const LayerConfig&) const = default;
};

struct ModelConfig {
  int n_humans = 4;
  int n_ai = 2;
  int resources = 3;
  // Empty means: the built-in profiles when the sizes match the defaults,
  // otherwise profiles drawn from the run seed. Resolution fills them in.
  std::vector<ProfileConfig> human_profiles;
  std::vector<ProfileConfig> ai_profiles;
  std::vector<std::vector<double>> contact;  // n_humans x n_ai; empty -> uniform contact_level
  double contact_level = 0.4;
  double epsilon = kDefaultCompatibilityEpsilon;
  LayerConfig physical, psychological, social;
  ObjectiveWeights weights;
  double alpha_P = 1.0, alpha_Psi = 1.0, alpha_S = 1.0, alpha_R = 1.0;
  double tau_P = 0.1, tau_Psi = 0.1, tau_S = 0.1;
  double beta_P = 1.0, beta_Psi = 1.0, beta_S = 1.0, beta_R = 1.0;
  double governance = 0.5;      // G_R = governance * I
  double reversibility = 0.1;   // G_rev = reversibility * I
  double conflict = 0.1;        // K = conflict * I
  double development = 0.1;     // u_dev = development * 1
  double development_cost = 0.1;  // D_r = development_cost * I
  double ai_cooperation = 0.0;  // off-diagonal entries of W_A
  double saturation = kDefaultSaturation;
  double support = kDefaultSupport;
  std::vector<double> x0;  // empty -> origin
  double horizon = 100.0;
  IntegratorControls integrator;
  bool operator==(const ModelConfig&) const = default;
};

struct ScenarioConfig {
  std::string preset = "baseline";
  ReducedParameters parameters = coexist::preset("baseline").params;
  ReducedState initial = coexist::preset("baseline").initial;
  double horizon = coexist::preset("baseline").horizon;
  std::vector<Shock> shocks;
  TrustShockMode trust_mode = TrustShockMode::ReduceViability;
  double trust_suppression_duration = 10.0;
  MetricSettings metrics;
  IntegratorControls integrator = default_scenario_integrator();
  bool operator==(const ScenarioConfig&) const = default;

  ScenarioPreset to_preset() const;
  ScenarioOptions to_options() const;
};

struct SensitivityConfig {
  std::size_t samples = 500;
  std::vector<ParameterRange> ranges;  // empty -> +-50% defaults around the scenario parameters
  bool operator==(const SensitivityConfig&) const = default;
};

struct OatConfig {
  std::string parameter = "mu_H";
  std::vector<double> values;  // empty -> 21 points from 0 to 2x the scenario value
  bool use_scenario_shocks = false;
  bool operator==(const OatConfig&) const = default;
};

struct ShockExperimentConfig {
  double time = 50.0;
  double magnitude = 0.5;
  std::vector<std::string> presets = {"baseline", "no_governance", "over_governance"};
  std::vector<ShockKind> kinds = {ShockKind::Trust, ShockKind::Physical, ShockKind::Governance};
  bool operator==(const ShockExperimentConfig&) const = default;
};

struct ExperimentConfig {
  BasinSettings basin;
  bool basin_g0_max_from_cap = true;  // g0 axis ends at g_cap unless set explicitly
  RegimeThresholds thresholds;
  SensitivityConfig sensitivity;
  OatConfig oat;
  ShockExperimentConfig shock;
  unsigned threads = 0;
  bool operator==(const ExperimentConfig&) const = default;
};

enum class OutputFormat { Csv, Json };

struct OutputConfig {
  std::optional<std::string> directory;  // resolved by the CLI when absent
  OutputFormat format = OutputFormat::Csv;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 42;
  ModelConfig model;
  ScenarioConfig scenario;
  ExperimentConfig experiment;
  OutputConfig output;
  bool operator==(const RunConfig&) const = default;
};

inline constexpr const char* kDefaultOutputDirectory = "coexistd_out";

// Parses and validates. Throws ConfigError naming the offending dotted key
// (or "<file>:line:column" position for syntax errors).
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Raw JSON with the same error positions; whitespace-only text is null.
nlohmann::json parse_json_text(const std::string& text, const std::string& source = "<config>");
nlohmann::json read_json_file(const std::filesystem::path& path);

// Fills seed-dependent and derived defaults (profiles, grid axis end,
// sensitivity ranges, OAT values) so that to_json lists every effective
// value. Idempotent.
void resolve(RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
void save_config(const RunConfig& config, const std::filesystem::path& path);

// Cross-field checks; throws ConfigError.
void validate(const RunConfig& config);

// Full model assembled from a resolved model section.
CoexistenceModel build_model(const RunConfig& config);

std::string to_string(Topology t);
std::string to_string(OutputFormat f);
std::string to_string(TrustShockMode m);

}  // namespace coexist
