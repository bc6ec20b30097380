#include "coexist/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "coexist/error.hpp"

namespace coexist {

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

constexpr std::string_view kShockPrefix = "shock:";

// Time average of f(state) over [t_from, t_end] by the trapezoid rule, with
// linear interpolation at t_from.
template <class F>
double window_average(const Trajectory& traj, double t_from, F&& f) {
  const auto& t = traj.times;
  const std::size_t n = t.size();
  if (n == 1 || t_from >= t.back()) return f(traj.states.back(), n - 1);
  const auto it = std::upper_bound(t.begin(), t.end(), t_from);
  std::size_t k = static_cast<std::size_t>(it - t.begin());
  double integral = 0.0;
  double t_prev = t_from;
  double v_prev;
  if (k == 0) {
    t_prev = t.front();
    v_prev = f(traj.states.front(), 0);
    k = 1;
  } else {
    const double w = (t_from - t[k - 1]) / (t[k] - t[k - 1]);
    v_prev = (1.0 - w) * f(traj.states[k - 1], k - 1) + w * f(traj.states[k], k);
  }
  const double t_start = t_prev;
  for (; k < n; ++k) {
    const double v = f(traj.states[k], k);
    integral += 0.5 * (v + v_prev) * (t[k] - t_prev);
    t_prev = t[k];
    v_prev = v;
  }
  const double span = t.back() - t_start;
  return span > 0.0 ? integral / span : v_prev;
}

struct TailMeans {
  double H, A, g, C;
};

TailMeans tail_means(const Trajectory& traj, double tail_fraction) {
  if (traj.empty()) throw DomainError("metrics need a nonempty trajectory");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw DomainError("tail fraction must lie in (0, 1]");
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const double from = t1 - tail_fraction * (t1 - t0);
  auto comp = [&](int c) {
    return window_average(traj, from, [c](const Vec& s, std::size_t) { return s(c); });
  };
  return TailMeans{comp(0), comp(1), comp(2), comp(3)};
}

bool is_shock_event(const TrajectoryEvent& e) {
  return std::string_view(e.label).substr(0, kShockPrefix.size()) == kShockPrefix;
}

ReducedState clamped(const Vec& v) {
  return ReducedState{std::max(v(0), 0.0), std::max(v(1), 0.0), std::max(v(2), 0.0),
                      std::max(v(3), 0.0)};
}

}  // namespace

Vec ReducedState::to_vector() const {
  Vec v(4);
  v << H, A, g, C;
  return v;
}

ReducedState ReducedState::from_vector(const Vec& v) {
  if (v.size() != 4) throw DimensionError("reduced state has four components");
  return ReducedState{v(0), v(1), v(2), v(3)};
}

void ReducedParameters::validate() const {
  for (std::string_view name : kReducedParameterNames) {
    const double v = parameter_value(*this, name);
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError("parameter " + std::string(name) + " must be finite and >= 0");
  }
  if (!(K_H > 0.0)) throw DomainError("parameter K_H must be > 0");
  if (!(K_A > 0.0)) throw DomainError("parameter K_A must be > 0");
  if (!(g_cap > 0.0)) throw DomainError("parameter g_cap must be > 0");
  if (!(h_sat > 0.0)) throw DomainError("parameter h_sat must be > 0");
}

double& parameter_ref(ReducedParameters& p, std::string_view name) {
  if (name == "r_H") return p.r_H;
  if (name == "r_A") return p.r_A;
  if (name == "K_H") return p.K_H;
  if (name == "K_A") return p.K_A;
  if (name == "mu_H") return p.mu_H;
  if (name == "mu_A") return p.mu_A;
  if (name == "h_sat") return p.h_sat;
  if (name == "c_asym") return p.c_asym;
  if (name == "c_0") return p.c_0;
  if (name == "d_C") return p.d_C;
  if (name == "d_C0") return p.d_C0;
  if (name == "kappa_H") return p.kappa_H;
  if (name == "kappa_A") return p.kappa_A;
  if (name == "g_gain") return p.g_gain;
  if (name == "g_decay") return p.g_decay;
  if (name == "g_cap") return p.g_cap;
  if (name == "g_brake") return p.g_brake;
  throw DomainError("unknown reduced-model parameter '" + std::string(name) + "'");
}

double parameter_value(const ReducedParameters& p, std::string_view name) {
  return parameter_ref(const_cast<ReducedParameters&>(p), name);
}

std::string to_string(ShockKind kind) {
  switch (kind) {
    case ShockKind::Trust: return "trust";
    case ShockKind::Physical: return "physical";
    case ShockKind::Governance: return "governance";
  }
  return "unknown";
}

ShockKind shock_kind_from_string(std::string_view s) {
  if (s == "trust") return ShockKind::Trust;
  if (s == "physical") return ShockKind::Physical;
  if (s == "governance") return ShockKind::Governance;
  throw DomainError("unknown shock kind '" + std::string(s) + "'");
}

std::string to_string(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::NotApplicable: return "not_applicable";
    case RecoveryKind::PostShock: return "post_shock";
    case RecoveryKind::Settling: return "settling";
  }
  return "unknown";
}

Normalizers Normalizers::from(const ReducedParameters& p, const MetricSettings& m) {
  if (!(m.C_ref > 0.0)) throw DomainError("C_ref must be positive");
  return Normalizers{p.K_H, p.K_A, p.g_cap, m.C_ref};
}

IntegratorControls default_scenario_integrator() {
  IntegratorControls c;
  c.max_step = 0.05;
  return c;
}

std::array<double, 4> reduced_rhs(const ReducedState& s, const ReducedParameters& p) {
  if (s.H < 0.0 || s.A < 0.0 || s.g < 0.0 || s.C < 0.0)
    throw DomainError("reduced state must be nonnegative");
  const double dH = p.r_H * s.H * (1.0 - s.H / p.K_H) + p.mu_H * s.H * s.A / (p.h_sat + s.A) -
                    p.kappa_H * s.C * s.H;
  const double dA = p.r_A * s.A * (1.0 - s.A / p.K_A) + p.mu_A * s.A * s.H / (p.h_sat + s.H) -
                    p.g_brake * s.g * s.A - p.kappa_A * s.C * s.A;
  const double dg = p.g_gain * s.H * (p.g_cap - s.g) - p.g_decay * s.g;
  const double dC = p.c_0 + p.c_asym * std::abs(s.A - s.H) - (p.d_C * s.g + p.d_C0) * s.C;
  return {dH, dA, dg, dC};
}

ReducedState apply_shock(const ReducedState& state, ShockKind kind, double magnitude) {
  if (!(magnitude > 0.0 && magnitude <= 1.0)) throw DomainError("shock magnitude must lie in (0, 1]");
  ReducedState out = state;
  switch (kind) {
    case ShockKind::Trust:
    case ShockKind::Physical: out.H = std::max(0.0, state.H * (1.0 - magnitude)); break;
    case ShockKind::Governance: out.g = std::max(0.0, state.g * (1.0 - magnitude)); break;
  }
  return out;
}

double instantaneous_score(const ReducedState& s, const Normalizers& n) {
  const double joint = clip01(s.H / n.H_ref) * clip01(s.A / n.A_ref) * clip01(s.g / n.g_ref);
  return std::cbrt(joint) * (1.0 - clip01(s.C / n.C_ref));
}

double coexistence_index(const Trajectory& traj, const Normalizers& n, double tail_fraction) {
  const TailMeans m = tail_means(traj, tail_fraction);
  const double joint = clip01(m.H / n.H_ref) * clip01(m.A / n.A_ref) * clip01(m.g / n.g_ref);
  return std::cbrt(joint) * (1.0 - clip01(m.C / n.C_ref));
}

double domination_index(const Trajectory& traj, const Normalizers& n, double tail_fraction) {
  const TailMeans m = tail_means(traj, tail_fraction);
  const double nA = clip01(m.A / n.A_ref);
  const double rest = std::min(clip01(m.H / n.H_ref), clip01(m.g / n.g_ref));
  return clip01(nA - rest);
}

double conflict_burden(const Trajectory& traj) {
  if (traj.empty()) throw DomainError("conflict burden needs a nonempty trajectory");
  return window_average(traj, traj.times.front(), [](const Vec& s, std::size_t) { return s(3); });
}

std::optional<double> recovery_time(const Trajectory& traj, double shock_time, double pre_window,
                                    double band, double dwell) {
  if (traj.empty()) throw DomainError("recovery time needs a nonempty trajectory");
  const auto& t = traj.times;
  const auto& score = traj.J_values;
  if (!(shock_time > t.front() && shock_time <= t.back()))
    throw DomainError("shock time lies outside the trajectory");
  if (!(pre_window > 0.0) || !(band >= 0.0) || !(dwell >= 0.0))
    throw DomainError("recovery window, band and dwell must be positive");

  // Pre-shock reference: trapezoid average over [shock - window, shock).
  const std::size_t k = static_cast<std::size_t>(
      std::lower_bound(t.begin(), t.end(), shock_time) - t.begin());
  std::size_t first = k;
  while (first > 0 && t[first - 1] >= shock_time - pre_window) --first;
  double reference;
  if (first + 1 >= k) {
    reference = score[k > 0 ? k - 1 : 0];
  } else {
    double integral = 0.0;
    for (std::size_t i = first + 1; i < k; ++i)
      integral += 0.5 * (score[i] + score[i - 1]) * (t[i] - t[i - 1]);
    reference = integral / (t[k - 1] - t[first]);
  }

  std::vector<char> inside(score.size());
  for (std::size_t i = 0; i < score.size(); ++i)
    inside[i] = std::abs(score[i] - reference) <= band;

  // next_out[i]: first index >= i outside the band.
  std::vector<std::size_t> next_out(score.size() + 1, score.size());
  for (std::size_t i = score.size(); i-- > 0;) next_out[i] = inside[i] ? next_out[i + 1] : i;

  for (std::size_t i = k; i < t.size(); ++i) {
    if (t[i] + dwell > t.back() + 1e-12) break;
    if (!inside[i]) continue;
    const std::size_t out = next_out[i];
    if (out == t.size() || t[out] > t[i] + dwell) return t[i] - shock_time;
  }
  return std::nullopt;
}

std::optional<double> recovery_after_first_shock(const Trajectory& traj,
                                                 const MetricSettings& settings) {
  for (const auto& e : traj.events)
    if (is_shock_event(e))
      return recovery_time(traj, e.time, settings.pre_window, settings.band, settings.dwell);
  return std::nullopt;
}

std::optional<double> settling_time(const Trajectory& traj, double band) {
  if (traj.empty()) return std::nullopt;
  const double terminal = traj.J_values.back();
  for (std::size_t i = traj.size(); i-- > 0;)
    if (std::abs(traj.J_values[i] - terminal) > band)
      return traj.times[i + 1] - traj.times.front();
  return 0.0;
}

MetricsRecord compute_metrics(const Trajectory& traj, const ReducedParameters& params,
                              const MetricSettings& settings, bool shocked) {
  const Normalizers n = Normalizers::from(params, settings);
  MetricsRecord m;
  m.coexistence_index = coexistence_index(traj, n, settings.tail_fraction);
  m.domination_index = domination_index(traj, n, settings.tail_fraction);
  m.conflict_burden = conflict_burden(traj);
  if (shocked) {
    m.recovery_time = recovery_after_first_shock(traj, settings);
    m.recovery_kind = RecoveryKind::PostShock;
  } else {
    m.recovery_time = settling_time(traj, settings.band);
    m.recovery_kind = RecoveryKind::Settling;
  }
  return m;
}

ScenarioRun run_scenario(const ScenarioPreset& preset, const std::vector<Shock>& shocks,
                         const ScenarioOptions& options) {
  if (!(preset.horizon > 0.0)) throw DomainError("scenario horizon must be positive");
  preset.params.validate();
  {
    const auto& s = preset.initial;
    if (s.H < 0.0 || s.A < 0.0 || s.g < 0.0 || s.C < 0.0)
      throw DomainError("initial reduced state must be nonnegative");
  }
  for (const auto& s : shocks) {
    if (!(s.time > 0.0 && s.time < preset.horizon))
      throw DomainError("shock time must lie strictly inside the horizon");
    if (!(s.magnitude > 0.0 && s.magnitude <= 1.0))
      throw DomainError("shock magnitude must lie in (0, 1]");
  }
  const Normalizers norm = Normalizers::from(preset.params, options.metrics);

  // Breakpoints: shocks, plus the end of each mutualism suppression window.
  struct Action {
    double time;
    int order;  // suppression end before a shock at the same time
    std::optional<Shock> shock;
    double mu_H_restore = 0.0;
  };
  std::vector<Action> pending;
  for (const auto& s : shocks) pending.push_back(Action{s.time, 1, s, 0.0});

  ReducedParameters params = preset.params;
  Trajectory traj;
  Vec x = preset.initial.to_vector();
  double t = 0.0;

  auto record_segment = [&](OdeSolution&& sol, bool first) {
    for (std::size_t i = first ? 0 : 1; i < sol.times.size(); ++i) {
      traj.times.push_back(sol.times[i]);
      traj.J_values.push_back(instantaneous_score(ReducedState::from_vector(sol.states[i]), norm));
      traj.states.push_back(std::move(sol.states[i]));
    }
  };

  auto integrate_to = [&](double t_end, bool first) {
    const ReducedParameters seg_params = params;
    OdeRhs rhs = [&seg_params](double, const Vec& v, Vec& dv) {
      const auto r = reduced_rhs(clamped(v), seg_params);
      dv.resize(4);
      dv << r[0], r[1], r[2], r[3];
    };
    StepObserver clamp = [&traj](double tc, Vec& v) {
      if ((v.array() < 0.0).any()) {
        v = v.cwiseMax(0.0);
        traj.events.push_back(TrajectoryEvent{tc, "clamp"});
      }
      return false;
    };
    try {
      OdeSolution sol = integrate_ode(rhs, t, x, t_end, options.integrator, clamp);
      x = sol.states.back();
      record_segment(std::move(sol), first);
    } catch (const IntegrationError& e) {
      OdeSolution partial = e.partial();
      record_segment(std::move(partial), first);
      throw IntegrationError(e.what(), OdeSolution{traj.times, traj.states, false});
    }
    t = t_end;
  };

  bool first = true;
  std::size_t next = 0;
  while (true) {
    std::stable_sort(pending.begin() + static_cast<std::ptrdiff_t>(next), pending.end(),
                     [](const Action& a, const Action& b) {
                       return a.time < b.time || (a.time == b.time && a.order < b.order);
                     });
    const double t_end = next < pending.size() ? pending[next].time : preset.horizon;
    if (t_end > t) {
      integrate_to(t_end, first);
      first = false;
    }
    if (next >= pending.size()) break;
    const Action act = pending[next++];
    if (!act.shock) {
      params.mu_H = act.mu_H_restore;
      traj.events.push_back(TrajectoryEvent{act.time, "restore:mu_H"});
      continue;
    }
    const Shock& s = *act.shock;
    traj.events.push_back(TrajectoryEvent{act.time, std::string(kShockPrefix) + to_string(s.kind)});
    if (s.kind == ShockKind::Trust && options.trust_mode == TrustShockMode::SuppressMutualism) {
      const double restore_at = std::min(act.time + options.trust_suppression_duration, preset.horizon);
      pending.push_back(Action{restore_at, 0, std::nullopt, params.mu_H});
      params.mu_H *= 1.0 - s.magnitude;
    } else {
      const ReducedState post = apply_shock(ReducedState::from_vector(x), s.kind, s.magnitude);
      x = post.to_vector();
      traj.states.back() = x;
      traj.J_values.back() = instantaneous_score(post, norm);
    }
  }

  ScenarioRun run;
  run.metrics = compute_metrics(traj, preset.params, options.metrics, !shocks.empty());
  run.trajectory = std::move(traj);
  return run;
}

}  // namespace coexist
