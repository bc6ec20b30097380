#include "coexist/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "coexist/error.hpp"

namespace coexist {

Trajectory integrate_flow(const CoexistenceModel& model, const Vec& x0, double horizon,
                          const FlowControls& controls) {
  if (x0.size() != model.dim()) throw DimensionError("initial state does not match model dimension");
  const Vec& b = model.support();
  const Mat& A = model.A_sys();
  const Vec& nu = model.saturation();
  OdeRhs rhs = [&](double, const Vec& x, Vec& dx) {
    dx.noalias() = b - A * x;
    dx.array() -= nu.array() * x.array().cube();
  };

  bool converged = false;
  StepObserver observer;
  if (controls.convergence_gradient > 0.0) {
    observer = [&](double, Vec& x) {
      converged = eval_grad_J(model, x).norm() <= controls.convergence_gradient;
      return converged;
    };
  }
  OdeSolution sol = integrate_ode(rhs, 0.0, x0, horizon, controls.integrator, observer);

  Trajectory traj;
  traj.times = std::move(sol.times);
  traj.states = std::move(sol.states);
  traj.J_values.reserve(traj.states.size());
  for (const Vec& x : traj.states) traj.J_values.push_back(eval_J(model, x));
  traj.termination = converged ? Termination::Converged : Termination::HorizonReached;
  return traj;
}

MonotoneReport check_monotone_ascent(const Trajectory& traj, double tol) {
  MonotoneReport report;
  for (std::size_t i = 1; i < traj.J_values.size(); ++i)
    report.max_violation = std::max(report.max_violation, traj.J_values[i - 1] - traj.J_values[i]);
  report.pass = report.max_violation <= tol;
  return report;
}

double EquilibriumReport::stability_score() const noexcept {
  return dominant_real_part < 0.0 ? -dominant_real_part : 0.0;
}

namespace {

Vec burn_in(const CoexistenceModel& model, const Vec& from, const NewtonControls& c) {
  try {
    return integrate_flow(model, from, c.burn_in_horizon, c.burn_in).terminal();
  } catch (const IntegrationError& e) {
    if (e.partial().states.empty()) throw;
    return e.partial().states.back();
  }
}

}  // namespace

EquilibriumReport solve_equilibrium(const CoexistenceModel& model, const std::optional<Vec>& x0,
                                    const NewtonControls& controls) {
  if (controls.max_iterations < 1) throw DomainError("Newton needs at least one iteration");
  if (!(controls.residual_tol > 0.0)) throw DomainError("residual tolerance must be positive");
  if (x0 && x0->size() != model.dim()) throw DimensionError("initial iterate does not match model");

  Vec x = x0 ? *x0 : burn_in(model, Vec::Zero(model.dim()), controls);
  Vec F = eval_grad_J(model, x);
  double res = F.norm();
  bool retried = false;
  EquilibriumReport report;

  int it = 0;
  while (res > controls.residual_tol && it < controls.max_iterations) {
    ++it;
    const Mat H = eval_hessian_J(model, x);
    Eigen::FullPivLU<Mat> lu(H);
    if (!lu.isInvertible()) {
      if (retried) break;
      retried = true;
      x = burn_in(model, x, controls);
      F = eval_grad_J(model, x);
      res = F.norm();
      continue;
    }
    const Vec step = lu.solve(-F);
    double scale = 1.0;
    bool improved = false;
    for (int k = 0; k <= controls.max_halvings; ++k, scale *= 0.5) {
      const Vec trial = x + scale * step;
      const Vec F_trial = eval_grad_J(model, trial);
      const double r_trial = F_trial.norm();
      if (std::isfinite(r_trial) && r_trial < res) {
        x = trial;
        F = F_trial;
        res = r_trial;
        improved = true;
        break;
      }
    }
    if (!improved) break;  // residual at its floating-point floor
  }

  report.x_star = x;
  report.residual_norm = res;
  report.iterations = it;
  report.converged = res <= controls.residual_tol;
  const auto spectrum = jacobian_spectrum(model, x);
  report.jacobian_eigen_real_parts.resize(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    report.jacobian_eigen_real_parts(static_cast<Eigen::Index>(i)) = spectrum[i].real();
  report.dominant_real_part = spectrum.empty() ? 0.0 : spectrum.front().real();
  return report;
}

std::vector<std::complex<double>> jacobian_spectrum(const CoexistenceModel& model, const Vec& x) {
  const Vec ev = symmetric_eigenvalues(eval_hessian_J(model, x));
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = ev.size(); i-- > 0;) out.emplace_back(ev(i), 0.0);
  return out;
}

SpectralReport check_spectral_condition(const CoexistenceModel& model) {
  SpectralReport rep;
  rep.lhs = min_eigenvalue(model.regulation());
  rep.rhs = model.params().weights.delta * max_eigenvalue(model.M());
  rep.margin = rep.lhs - rep.rhs;
  rep.holds = rep.lhs > rep.rhs;
  rep.lambda_min_A = min_eigenvalue(model.A_sys());
  return rep;
}

bool is_nonsingular_m_matrix(const Mat& A) {
  if (A.rows() != A.cols()) throw DimensionError("M-matrix test needs a square matrix");
  const Eigen::Index n = A.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && A(i, j) > 0.0) return false;
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) return false;
  return (lu.inverse().array() >= -1e-12).all();
}

Mat mutualism_edge_derivative(const CoexistenceModel& model, HumanAiEdge edge) {
  const auto& pop = model.population();
  if (edge.human < 0 || edge.human >= pop.n_humans || edge.ai < 0 || edge.ai >= pop.n_ai)
    throw DomainError("edge index out of range");
  const auto& prm = model.params();
  const int N = pop.agents();
  const int i = edge.human, j = pop.n_humans + edge.ai;
  Mat dM = Mat::Zero(pop.dim(), pop.dim());
  const double betas[3] = {prm.beta_P, prm.beta_Psi, prm.beta_S};
  for (int layer = 0; layer < 3; ++layer) {
    const int off = layer * N;
    dM(off + i, off + j) = betas[layer];
    dM(off + j, off + i) = betas[layer];
  }
  return dM;
}

EquilibriumSensitivity equilibrium_sensitivity(const CoexistenceModel& model, HumanAiEdge edge) {
  const Mat& A = model.A_sys();
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw NumericalError("A_sys is singular; linearized equilibrium undefined");
  EquilibriumSensitivity out;
  out.x_star = lu.solve(model.support());
  const double delta = model.params().weights.delta;
  out.derivative = delta * lu.solve(mutualism_edge_derivative(model, edge) * out.x_star);
  if (!is_nonsingular_m_matrix(A)) {
    out.preconditions_hold = false;
    out.warning = "A_sys is not a nonsingular M-matrix";
  }
  if ((model.support().array() < 0.0).any()) {
    out.preconditions_hold = false;
    if (!out.warning.empty()) out.warning += "; ";
    out.warning += "support vector has negative entries";
  }
  return out;
}

double boundedness_radius(const CoexistenceModel& model) {
  const double nu_min = model.saturation().minCoeff();
  if (!(nu_min > 0.0)) throw DomainError("boundedness radius needs nu_min > 0");
  const double d = static_cast<double>(model.dim());
  const double a = 0.5 + spectral_norm(model.A_sys());
  const double c = nu_min / d;
  const double b2 = model.support().squaredNorm();
  const double s = (a + std::sqrt(a * a + 2.0 * c * b2)) / (2.0 * c);
  return std::sqrt(s);
}

}  // namespace coexist
