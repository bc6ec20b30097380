#include "coexist/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "coexist/dynamics.hpp"
#include "coexist/instances.hpp"
#include "coexist/parallel.hpp"
#include "coexist/seed.hpp"

namespace coexist {

namespace {

struct Trial {
  bool ok = false;
  double value = 0.0;
  std::string note;
};

Vec random_point(std::mt19937_64& rng, Eigen::Index d, double max_radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = gauss(rng);
  const double radius = max_radius * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return radius * v / v.norm();
}

CheckResult collect(std::string name, std::string statement, double tolerance,
                    const std::vector<Trial>& trials) {
  CheckResult out;
  out.name = std::move(name);
  out.statement = std::move(statement);
  out.tolerance = tolerance;
  out.trials = trials.size();
  for (const Trial& t : trials) {
    out.passed_trials += t.ok ? 1 : 0;
    out.worst = std::max(out.worst, t.value);
    if (!t.ok && out.detail.empty()) out.detail = t.note;
  }
  out.pass = out.trials > 0 && out.passed_trials == out.trials;
  return out;
}

std::string describe(std::size_t i, const std::string& what) {
  std::ostringstream os;
  os << "trial " << i << ": " << what;
  return os.str();
}

CoexistenceModel with_governance(const CoexistenceModel& m, const Mat& G_R, const Mat& G_rev) {
  LayerOperators layers = m.layers();
  layers.G_R = G_R;
  CoexistenceParameters p = m.params();
  p.G_rev = G_rev;
  return assemble_model(m.population(), p, layers, m.network());
}

CoexistenceModel with_edge_weight(const CoexistenceModel& m, HumanAiEdge e, double w) {
  MutualisticNetwork net = m.network();
  net.W(e.human, e.ai) = w;
  return assemble_model(m.population(), m.params(), m.layers(), net);
}

Vec linear_equilibrium(const CoexistenceModel& m) {
  return Eigen::FullPivLU<Mat>(m.A_sys()).solve(m.support());
}

}  // namespace

CheckResult check_bounded_compatibility(const VerifySettings& s) {
  std::vector<Trial> trials(s.lemma_profiles);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(s.seed, "bounded_compatibility", i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int k = std::uniform_int_distribution<int>(1, 6)(rng);
    const double scale = std::pow(10.0, -3.0 + 6.0 * u(rng));
    auto vec = [&] {
      Vec v(k);
      for (int j = 0; j < k; ++j) v[j] = u(rng) < 0.3 ? 0.0 : scale * u(rng);
      return v;
    };
    const SupplyDemandProfile h{vec(), vec()}, a{vec(), vec()};
    const double eps = std::pow(10.0, -12.0 + 11.0 * u(rng));
    const double m = reciprocal_compatibility(h, a, eps);
    const double contact = u(rng);
    const MutualisticNetwork net =
        effective_weights(Mat::Constant(1, 1, m), ContactNetwork{Mat::Constant(1, 1, contact)});
    const double w = net.W(0, 0);
    trials[i].value = m;
    trials[i].ok = m >= 0.0 && m < 1.0 && w >= 0.0 && w <= contact;
    if (!trials[i].ok) trials[i].note = describe(i, "compatibility outside [0,1) or weight above contact");
  });
  return collect("bounded_compatibility", "0 <= m_ij < 1 and 0 <= w_ij <= a_ij", 1.0, trials);
}

CheckResult check_ascent_property(const VerifySettings& s) {
  std::vector<Trial> trials(s.ascent_instances);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "monotone_ascent", i);
    InstanceOptions opt;
    opt.kind = i % 2 == 0 ? InstanceKind::SpectrallyStable : InstanceKind::Indefinite;
    const CoexistenceModel model = random_instance(seed, opt);
    std::mt19937_64 rng(splitmix64(seed));
    const Vec x0 = random_point(rng, model.dim(), 5.0);
    try {
      FlowControls full;
      full.convergence_gradient = 0.0;
      const Trajectory traj = integrate_flow(model, x0, s.ascent_horizon, full);
      const MonotoneReport rep = check_monotone_ascent(traj, 1e-9);
      trials[i].value = rep.max_violation;
      trials[i].ok = rep.pass;
      if (!rep.pass) trials[i].note = describe(i, "J decreased along the flow");
    } catch (const NumericalError& e) {
      trials[i].note = describe(i, e.what());
    }
  });
  return collect("monotone_ascent", "J nondecreasing along every integrated flow", 1e-9, trials);
}

CheckResult check_unique_global_convergence(const VerifySettings& s) {
  std::vector<Trial> trials(s.convergence_instances);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "unique_global_convergence", i);
    const CoexistenceModel model = random_instance(seed, {InstanceKind::SpectrallyStable, 30});
    std::mt19937_64 rng(splitmix64(seed));
    // Tight tolerances: near the equilibrium the step size sits at the
    // stability limit and the residual oscillation scales with abs_tol.
    FlowControls fc;
    fc.convergence_gradient = 1e-10;
    fc.integrator.abs_tol = 1e-13;
    fc.integrator.rel_tol = 1e-11;
    try {
      const EquilibriumReport eq = solve_equilibrium(model);
      std::vector<Vec> terminals;
      for (std::size_t k = 0; k < s.convergence_starts; ++k)
        terminals.push_back(integrate_flow(model, random_point(rng, model.dim(), 10.0), 1000.0, fc).terminal());
      double worst = 0.0;
      for (std::size_t a = 0; a < terminals.size(); ++a) {
        worst = std::max(worst, (terminals[a] - eq.x_star).norm());
        for (std::size_t b = a + 1; b < terminals.size(); ++b)
          worst = std::max(worst, (terminals[a] - terminals[b]).norm());
      }
      trials[i].value = worst;
      trials[i].ok = eq.converged && worst <= 1e-6;
      if (!trials[i].ok)
        trials[i].note = describe(i, eq.converged ? "terminal states disagree" : "Newton did not converge");
    } catch (const NumericalError& e) {
      trials[i].note = describe(i, e.what());
    }
  });
  return collect("unique_global_convergence",
                 "flows from 10 starts and Newton agree on one equilibrium", 1e-6, trials);
}

CheckResult check_spectral_soundness(const VerifySettings& s) {
  // Unconstrained instances, keeping those where the condition holds.
  std::vector<Trial> trials;
  const std::size_t max_attempts = 100 * s.spectral_instances + 1000;
  for (std::size_t attempt = 0; trials.size() < s.spectral_instances && attempt < max_attempts; ++attempt) {
    const CoexistenceModel model =
        random_instance(derive_seed(s.seed, "spectral_soundness", attempt), {InstanceKind::Unconstrained, 30});
    const SpectralReport rep = check_spectral_condition(model);
    if (!rep.holds) continue;
    const double lmin = min_eigenvalue(model.A_sys());
    Trial t;
    t.value = -lmin;
    t.ok = lmin > 0.0;
    if (!t.ok) t.note = describe(attempt, "condition held but A_sys is not positive definite");
    trials.push_back(t);
  }
  CheckResult r = collect("spectral_soundness", "condition holds => lambda_min(A_sys) > 0", 0.0, trials);
  if (trials.size() < s.spectral_instances) {
    r.pass = false;
    r.detail = "too few instances satisfied the condition";
  }
  return r;
}

CheckResult check_governance_monotonicity(const VerifySettings& s) {
  std::vector<Trial> trials(s.governance_increments);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "governance_monotonicity", i);
    const CoexistenceModel model = random_instance(seed, {InstanceKind::Unconstrained, 30});
    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_real_distribution<double> u(0.05, 2.0);
    const int m = model.population().n_ai, d = model.dim();
    const Mat dG_R = random_psd(m, u(rng), rng());
    const Mat dG_rev = random_psd(d, u(rng), rng());
    const double before = check_spectral_condition(model).margin;
    const Mat& G_R = model.layers().G_R;
    const Mat& G_rev = model.params().G_rev;
    const double after_R = check_spectral_condition(with_governance(model, G_R + dG_R, G_rev)).margin;
    const double after_rev = check_spectral_condition(with_governance(model, G_R, G_rev + dG_rev)).margin;
    trials[i].value = std::max(before - after_R, before - after_rev);
    trials[i].ok = trials[i].value <= 1e-10;
    if (!trials[i].ok) trials[i].note = describe(i, "margin decreased after a PSD increment");
  });
  return collect("governance_monotonicity", "PSD increments to G_R or G_rev never shrink the margin",
                 1e-10, trials);
}

CheckResult check_comparative_statics(const VerifySettings& s) {
  std::vector<Trial> trials(s.statics_instances);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "comparative_statics", i);
    const CoexistenceModel model = random_instance(seed, {InstanceKind::MMatrix, 30});
    Trial& t = trials[i];
    if (!is_nonsingular_m_matrix(model.A_sys())) {
      t.value = 1.0;
      t.note = describe(i, "generated instance is not a nonsingular M-matrix");
      return;
    }
    const auto& pop = model.population();
    double min_x = linear_equilibrium(model).minCoeff();
    double min_derivative = 0.0, fd_error = 0.0;
    for (int h = 0; h < pop.n_humans; ++h) {
      for (int a = 0; a < pop.n_ai; ++a) {
        const HumanAiEdge e{h, a};
        const EquilibriumSensitivity sens = equilibrium_sensitivity(model, e);
        min_derivative = std::min(min_derivative, sens.derivative.minCoeff());
        const double w = model.network().W(h, a);
        const double step = 1e-5;
        const Vec plus = linear_equilibrium(with_edge_weight(model, e, w + step));
        const Vec minus = linear_equilibrium(with_edge_weight(model, e, w - step));
        const Vec fd = (plus - minus) / (2.0 * step);
        const double scale = std::max(sens.derivative.cwiseAbs().maxCoeff(), 1e-12);
        fd_error = std::max(fd_error, (fd - sens.derivative).cwiseAbs().maxCoeff() / scale);
      }
    }
    t.value = std::max({-min_x, -min_derivative, fd_error});
    t.ok = min_x >= -1e-12 && min_derivative >= -1e-12 && fd_error <= 1e-6;
    if (!t.ok) {
      std::ostringstream os;
      os << "min x* " << min_x << ", min derivative " << min_derivative << ", fd error " << fd_error;
      t.note = describe(i, os.str());
    }
  });
  return collect("comparative_statics",
                 "M-matrix instances: x* >= 0, dx*/dw_ij >= 0, finite differences agree", 1e-6, trials);
}

CheckResult check_boundedness(const VerifySettings& s) {
  std::vector<Trial> trials(s.boundedness_trajectories);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "boundedness", i);
    InstanceOptions opt;
    opt.kind = i % 2 == 0 ? InstanceKind::Indefinite : InstanceKind::Unconstrained;
    const CoexistenceModel model = random_instance(seed, opt);
    std::mt19937_64 rng(splitmix64(seed));
    const double R = boundedness_radius(model);
    const Vec x0 = random_point(rng, model.dim(), 2.0 * R);
    const double ball = std::max(R, x0.norm());
    try {
      const Trajectory traj = integrate_flow(model, x0, 50.0);
      double peak = 0.0;
      for (const Vec& x : traj.states) peak = std::max(peak, x.norm());
      // Relative excess over the ball; the allowance covers integrator error.
      trials[i].value = (peak - ball) / ball;
      trials[i].ok = peak <= ball * (1.0 + 1e-6);
      if (!trials[i].ok) trials[i].note = describe(i, "trajectory left the containment ball");
    } catch (const NumericalError& e) {
      trials[i].value = 1.0;
      trials[i].note = describe(i, e.what());
    }
  });
  CheckResult r = collect("boundedness", "trajectories stay inside max(R, |x0|)", 1e-6, trials);
  r.worst = std::max(r.worst, 0.0);
  return r;
}

CheckResult check_derivatives(const VerifySettings& s) {
  std::vector<Trial> trials(s.derivative_instances);
  parallel_for(trials.size(), s.threads, [&](std::size_t i) {
    const std::uint64_t seed = derive_seed(s.seed, "derivatives", i);
    const CoexistenceModel model = random_instance(seed, {InstanceKind::Unconstrained, 20});
    std::mt19937_64 rng(splitmix64(seed));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int d = model.dim();
    Vec x(d);
    for (int k = 0; k < d; ++k) x[k] = u(rng);
    const double h = 1e-5;
    const Vec g = eval_grad_J(model, x);
    const Mat H = eval_hessian_J(model, x);
    Vec g_fd(d);
    Mat H_fd(d, d);
    for (int k = 0; k < d; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      g_fd[k] = (eval_J(model, xp) - eval_J(model, xm)) / (2.0 * h);
      H_fd.col(k) = (eval_grad_J(model, xp) - eval_grad_J(model, xm)) / (2.0 * h);
    }
    const double g_err = (g_fd - g).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff());
    const double H_err = (H_fd - H).cwiseAbs().maxCoeff() / std::max(1.0, H.cwiseAbs().maxCoeff());
    // Report against the gradient tolerance; the Hessian bound is 10x looser.
    trials[i].value = std::max(g_err, H_err / 10.0);
    trials[i].ok = g_err <= 1e-5 && H_err <= 1e-4;
    if (!trials[i].ok) trials[i].note = describe(i, "finite differences disagree");
  });
  return collect("derivatives", "gradient within 1e-5 and Hessian within 1e-4 of finite differences",
                 1e-5, trials);
}

EquilibriumCertificate certify_baseline_equilibrium() {
  const CoexistenceModel model = baseline_analogue();
  const EquilibriumReport eq = solve_equilibrium(model);
  EquilibriumCertificate c;
  c.residual_norm = eq.residual_norm;
  c.dominant_real_part = eq.dominant_real_part;
  c.stability_score = eq.stability_score();
  c.iterations = eq.iterations;
  c.converged = eq.converged;
  const Trajectory flow = integrate_flow(model, Vec::Zero(model.dim()), 200.0);
  c.equilibrium_distance = (flow.terminal() - eq.x_star).norm();
  return c;
}

CheckResult check_equilibrium_certificate() {
  CheckResult r;
  r.name = "equilibrium_certificate";
  r.statement = "baseline analogue: residual <= 1e-10 and dominant real part < 0";
  r.trials = 1;
  r.tolerance = 1e-10;
  try {
    const EquilibriumCertificate c = certify_baseline_equilibrium();
    r.worst = c.residual_norm;
    r.pass = c.residual_norm <= 1e-10 && c.dominant_real_part < 0.0;
    r.passed_trials = r.pass ? 1 : 0;
    std::ostringstream os;
    os.precision(6);
    os << "residual " << c.residual_norm << ", dominant real part " << c.dominant_real_part
       << ", stability score " << c.stability_score << ", equilibrium distance " << c.equilibrium_distance;
    r.detail = os.str();
  } catch (const NumericalError& e) {
    r.detail = e.what();
  }
  return r;
}

std::vector<CheckResult> run_verification_suite(const VerifySettings& s) {
  return {check_bounded_compatibility(s), check_ascent_property(s),     check_unique_global_convergence(s),
          check_spectral_soundness(s),    check_governance_monotonicity(s), check_comparative_statics(s),
          check_boundedness(s),           check_derivatives(s),         check_equilibrium_certificate()};
}

}  // namespace coexist
