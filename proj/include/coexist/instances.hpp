#pragma once

// Random full-model instances for property checks, plus the full-model
// analogue of the calibrated baseline scenario.

#include <cstdint>
#include <vector>

#include "coexist/model.hpp"

namespace coexist {

enum class InstanceKind {
  // delta scaled down until the spectral condition holds with margin
  // (lambda_min(A_sys) >= half of lambda_min of the regulated part).
  SpectrallyStable,
  // delta scaled up until A_sys has a negative eigenvalue; saturation drawn
  // from [0.1, 1] keeps the flow bounded.
  Indefinite,
  // Z-matrix structure (Laplacian layers and governance, diagonal G_rev, K
  // and D_r, no AI-AI cooperation, nonnegative support) with A_sys > 0, so
  // A_sys is a nonsingular M-matrix.
  MMatrix,
  // No scaling of delta; any spectrum.
  Unconstrained,
};

struct InstanceOptions {
  InstanceKind kind = InstanceKind::Unconstrained;
  int max_dim = 30;  // d = 3 (n_humans + n_ai) + n_ai never exceeds this (>= 4)
  double saturation_lo = 0.1;
  double saturation_hi = 1.0;
};

CoexistenceModel random_instance(std::uint64_t seed, const InstanceOptions& options = {});

// Random PSD matrix B^T B / n with entries of B uniform in [-scale, scale].
Mat random_psd(int n, double scale, std::uint64_t seed);

struct ProfileSet {
  std::vector<SupplyDemandProfile> humans;
  std::vector<SupplyDemandProfile> ais;
};

// Supply-demand profiles of the baseline analogue (4 humans, 2 AI, 3 resources).
ProfileSet baseline_analogue_profiles();

// Deterministic 4-human, 2-AI model with moderate contact, complete-graph
// layers with light diffusion, identity-scaled governance, reversibility
// and conflict kernels, and default saturation and support.
CoexistenceModel baseline_analogue();

}  // namespace coexist
