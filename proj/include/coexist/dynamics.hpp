#pragma once

// Gradient-ascent flow dx/dt = grad J(x), equilibrium solving and the
// executable stability checks built on them.

#include <complex>
#include <optional>
#include <vector>

#include "coexist/model.hpp"
#include "coexist/ode.hpp"
#include "coexist/trajectory.hpp"

namespace coexist {

struct FlowControls {
  IntegratorControls integrator;
  // Stop once ||grad J|| falls to this value; <= 0 integrates the full horizon.
  double convergence_gradient = 1e-8;
};

// Trajectory of the flow from x0 over [0, horizon]. J_values hold eval_J.
// Integration failures propagate as IntegrationError with the partial
// solution.
Trajectory integrate_flow(const CoexistenceModel& model, const Vec& x0, double horizon,
                          const FlowControls& controls = {});

struct MonotoneReport {
  double max_violation = 0.0;  // max_i (J[i] - J[i+1]), 0 when nondecreasing
  bool pass = true;
};

MonotoneReport check_monotone_ascent(const Trajectory& traj, double tol);

struct NewtonControls {
  int max_iterations = 100;
  double residual_tol = 1e-12;
  int max_halvings = 40;
  double burn_in_horizon = 10.0;
  FlowControls burn_in;
};

struct EquilibriumReport {
  Vec x_star;
  double residual_norm = 0.0;
  Vec jacobian_eigen_real_parts;  // descending
  double dominant_real_part = 0.0;
  bool converged = false;
  int iterations = 0;

  bool locally_stable() const noexcept { return dominant_real_part < 0.0; }
  // |dominant real part| when locally stable, 0 otherwise.
  double stability_score() const noexcept;
};

// Damped Newton on F(x) = b - A x - nu x^3 with the Hessian of J as the
// Jacobian of F. Without x0 the iterate starts from the terminal state of a
// gradient-flow burn-in from the origin. A singular Newton system triggers a
// burn-in from the current iterate and one retry.
EquilibriumReport solve_equilibrium(const CoexistenceModel& model,
                                    const std::optional<Vec>& x0 = std::nullopt,
                                    const NewtonControls& controls = {});

// Eigenvalues of the flow Jacobian (the Hessian of J), sorted by
// descending real part. Real for this symmetric system.
std::vector<std::complex<double>> jacobian_spectrum(const CoexistenceModel& model, const Vec& x);

struct SpectralReport {
  double lhs = 0.0;  // lambda_min(Q + gamma G_rev + lambda K)
  double rhs = 0.0;  // delta lambda_max(M)
  double margin = 0.0;
  bool holds = false;
  double lambda_min_A = 0.0;  // eigen-check of A_sys itself
};

SpectralReport check_spectral_condition(const CoexistenceModel& model);

bool is_nonsingular_m_matrix(const Mat& A);

struct HumanAiEdge {
  int human = 0;
  int ai = 0;
};

struct EquilibriumSensitivity {
  Vec x_star;       // A_sys^{-1} support
  Vec derivative;   // d x* / d w_ij
  bool preconditions_hold = true;
  std::string warning;
};

// d M / d w_ij: the edge appears once in each of the three layer blocks.
Mat mutualism_edge_derivative(const CoexistenceModel& model, HumanAiEdge edge);

// Linearized-regime comparative statics (saturation ignored).
EquilibriumSensitivity equilibrium_sensitivity(const CoexistenceModel& model, HumanAiEdge edge);

// Radius R beyond which d/dt 1/2||x||^2 < 0, from
// 1/2||b||^2 + (1/2 + ||A||) R^2 - (nu_min / d) R^4 = 0.
double boundedness_radius(const CoexistenceModel& model);

}  // namespace coexist
