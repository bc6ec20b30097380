#pragma once

// Executable property checks for the full model: each check draws its own
// random instances from derive_seed(seed, check name, trial), so results
// depend only on the seed.

#include <cstdint>
#include <string>
#include <vector>

namespace coexist {

struct CheckResult {
  std::string name;
  std::string statement;
  std::size_t trials = 0;
  std::size_t passed_trials = 0;
  double worst = 0.0;      // worst observed value of the checked quantity
  double tolerance = 0.0;  // bound the worst value is compared against
  bool pass = false;
  std::string detail;
};

struct VerifySettings {
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::size_t lemma_profiles = 1000;
  std::size_t ascent_instances = 100;
  double ascent_horizon = 50.0;
  std::size_t convergence_instances = 20;
  std::size_t convergence_starts = 10;
  std::size_t spectral_instances = 100;
  std::size_t governance_increments = 100;
  std::size_t statics_instances = 20;
  std::size_t boundedness_trajectories = 50;
  std::size_t derivative_instances = 50;
};

CheckResult check_bounded_compatibility(const VerifySettings& s);
CheckResult check_ascent_property(const VerifySettings& s);
CheckResult check_unique_global_convergence(const VerifySettings& s);
CheckResult check_spectral_soundness(const VerifySettings& s);
CheckResult check_governance_monotonicity(const VerifySettings& s);
CheckResult check_comparative_statics(const VerifySettings& s);
CheckResult check_boundedness(const VerifySettings& s);
CheckResult check_derivatives(const VerifySettings& s);

struct EquilibriumCertificate {
  double residual_norm = 0.0;
  double dominant_real_part = 0.0;
  double stability_score = 0.0;
  double equilibrium_distance = 0.0;  // Euclidean, long-horizon flow terminal state vs x*
  int iterations = 0;
  bool converged = false;
};

EquilibriumCertificate certify_baseline_equilibrium();
CheckResult check_equilibrium_certificate();

std::vector<CheckResult> run_verification_suite(const VerifySettings& s);

}  // namespace coexist
