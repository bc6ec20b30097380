#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "coexist/error.hpp"
#include "coexist/linalg.hpp"

namespace coexist {

enum class IntegratorMethod { RK4, DormandPrince45 };

struct IntegratorControls {
  IntegratorMethod method = IntegratorMethod::DormandPrince45;
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  double min_step = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 1e-3;
  double fixed_step = 1e-2;  // RK4 only
  std::size_t max_steps = 50'000'000;
  bool operator==(const IntegratorControls&) const = default;
};

using OdeRhs = std::function<void(double t, const Vec& x, Vec& dxdt)>;

// Called after every accepted step. May modify x in place (projection onto
// an admissible set); return true to stop the integration early.
using StepObserver = std::function<bool(double t, Vec& x)>;

struct OdeSolution {
  std::vector<double> times;
  std::vector<Vec> states;
  bool stopped_early = false;
};

// Failure carrying everything integrated up to the last valid state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& message, OdeSolution partial)
      : NumericalError(message), partial_(std::move(partial)) {}
  const OdeSolution& partial() const noexcept { return partial_; }

 private:
  OdeSolution partial_;
};

// Integrates dx/dt = rhs(t, x) on [t0, t1]. The initial point is recorded;
// every accepted step appends one (t, x) pair, so times are strictly
// increasing. Throws IntegrationError on step-size underflow or a
// non-finite state.
OdeSolution integrate_ode(const OdeRhs& rhs, double t0, const Vec& x0, double t1,
                          const IntegratorControls& controls, const StepObserver& observer = {});

}  // namespace coexist
