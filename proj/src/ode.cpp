#include "coexist/ode.hpp"

#include <algorithm>
#include <cmath>

namespace coexist {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded fourth-order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

void validate(double t0, const Vec& x0, double t1, const IntegratorControls& c) {
  if (!(t1 > t0)) throw DomainError("integration horizon must be positive");
  if (!x0.allFinite()) throw DomainError("initial state must be finite");
  if (c.method == IntegratorMethod::RK4) {
    if (!(c.fixed_step > 0.0)) throw DomainError("fixed step must be positive");
  } else {
    if (!(c.abs_tol > 0.0) || !(c.rel_tol >= 0.0)) throw DomainError("tolerances must be positive");
    if (!(c.min_step > 0.0) || !(c.max_step > c.min_step))
      throw DomainError("step bounds must satisfy 0 < min_step < max_step");
  }
}

bool accept(OdeSolution& sol, double t, Vec& x, const StepObserver& observer) {
  if (!x.allFinite())
    throw IntegrationError("non-finite state at t = " + std::to_string(t), std::move(sol));
  const bool stop = observer ? observer(t, x) : false;
  sol.times.push_back(t);
  sol.states.push_back(x);
  return stop;
}

OdeSolution run_rk4(const OdeRhs& f, double t0, const Vec& x0, double t1,
                    const IntegratorControls& c, const StepObserver& observer) {
  OdeSolution sol;
  Vec x = x0;
  if (accept(sol, t0, x, observer)) {
    sol.stopped_early = true;
    return sol;
  }
  const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / c.fixed_step - 1e-9));
  const Eigen::Index n = x.size();
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = t0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t_next = (i == steps) ? t1 : t0 + static_cast<double>(i) * c.fixed_step;
    const double h = t_next - t;
    f(t, x, k1);
    tmp = x + 0.5 * h * k1;
    f(t + 0.5 * h, tmp, k2);
    tmp = x + 0.5 * h * k2;
    f(t + 0.5 * h, tmp, k3);
    tmp = x + h * k3;
    f(t + h, tmp, k4);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t_next;
    if (accept(sol, t, x, observer)) {
      sol.stopped_early = true;
      break;
    }
  }
  return sol;
}

OdeSolution run_dopri(const OdeRhs& f, double t0, const Vec& x0, double t1,
                      const IntegratorControls& c, const StepObserver& observer) {
  OdeSolution sol;
  Vec x = x0;
  if (accept(sol, t0, x, observer)) {
    sol.stopped_early = true;
    return sol;
  }
  const Eigen::Index n = x.size();
  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), x_new(n), err(n);
  double t = t0;
  double h = std::clamp(c.initial_step, c.min_step, c.max_step);
  f(t, x, k1);
  const double span_eps = 1e-13 * std::max(1.0, std::abs(t1));
  std::size_t steps = 0;

  while (t1 - t > span_eps) {
    if (++steps > c.max_steps) throw IntegrationError("maximum number of steps exceeded", std::move(sol));
    const double remaining = t1 - t;
    const bool last = h >= remaining;
    const double hs = last ? remaining : h;

    tmp = x + hs * (a21 * k1);
    f(t + c2 * hs, tmp, k2);
    tmp = x + hs * (a31 * k1 + a32 * k2);
    f(t + c3 * hs, tmp, k3);
    tmp = x + hs * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * hs, tmp, k4);
    tmp = x + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * hs, tmp, k5);
    tmp = x + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + hs, tmp, k6);
    x_new = x + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f(t + hs, x_new, k7);
    err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double scale = c.abs_tol + c.rel_tol * std::max(std::abs(x(i)), std::abs(x_new(i)));
      const double e = err(i) / scale;
      norm += e * e;
    }
    norm = n > 0 ? std::sqrt(norm / static_cast<double>(n)) : 0.0;
    if (!std::isfinite(norm)) norm = 1e10;

    if (norm <= 1.0) {
      t = last ? t1 : t + hs;
      x = x_new;
      const bool stop = accept(sol, t, x, observer);
      if (stop) {
        sol.stopped_early = true;
        return sol;
      }
      // The observer may have projected x; FSAL only holds when it did not.
      if (x == x_new)
        k1 = k7;
      else
        f(t, x, k1);
      const double grow = norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -0.2));
      if (!last) h = std::min(c.max_step, hs * grow);
    } else {
      const double shrink = std::max(0.2, 0.9 * std::pow(norm, -0.25));
      h = hs * shrink;
      if (h < c.min_step)
        throw IntegrationError("step size underflow at t = " + std::to_string(t), std::move(sol));
    }
  }
  return sol;
}

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, double t0, const Vec& x0, double t1,
                          const IntegratorControls& controls, const StepObserver& observer) {
  validate(t0, x0, t1, controls);
  if (controls.method == IntegratorMethod::RK4) return run_rk4(rhs, t0, x0, t1, controls, observer);
  return run_dopri(rhs, t0, x0, t1, controls, observer);
}

}  // namespace coexist
