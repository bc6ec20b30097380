#include <cmath>

#include "doctest.h"

#include "coexist/ode.hpp"

using namespace coexist;

namespace {

const OdeRhs decay = [](double, const Vec& x, Vec& dx) { dx = -x; };

}  // namespace

TEST_CASE("adaptive integration of exponential decay") {
  const OdeSolution sol = integrate_ode(decay, 0.0, Vec::Constant(1, 1.0), 1.0, IntegratorControls{});
  CHECK(sol.times.back() == 1.0);
  CHECK(sol.states.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
  CHECK(std::abs(sol.states.back()[0] - 0.3678794) < 1e-7);
  for (std::size_t i = 1; i < sol.times.size(); ++i) REQUIRE(sol.times[i] > sol.times[i - 1]);
}

TEST_CASE("fixed-step RK4 integration of exponential decay") {
  IntegratorControls c;
  c.method = IntegratorMethod::RK4;
  c.fixed_step = 1e-2;
  const OdeSolution sol = integrate_ode(decay, 0.0, Vec::Constant(1, 1.0), 1.0, c);
  CHECK(sol.times.size() == 101);
  CHECK(sol.states.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("maximum step is respected") {
  IntegratorControls c;
  c.max_step = 0.05;
  const OdeSolution sol = integrate_ode(decay, 0.0, Vec::Constant(1, 1.0), 2.0, c);
  for (std::size_t i = 1; i < sol.times.size(); ++i) REQUIRE(sol.times[i] - sol.times[i - 1] <= 0.05 + 1e-15);
}

TEST_CASE("observer can stop the integration") {
  const OdeSolution sol = integrate_ode(decay, 0.0, Vec::Constant(1, 1.0), 10.0, IntegratorControls{},
                                        [](double t, Vec&) { return t > 1.0; });
  CHECK(sol.stopped_early);
  CHECK(sol.times.back() < 10.0);
}

TEST_CASE("blow-up raises an integration error carrying the partial solution") {
  const OdeRhs blowup = [](double, const Vec& x, Vec& dx) { dx = x.cwiseProduct(x); };
  try {
    integrate_ode(blowup, 0.0, Vec::Constant(1, 1.0), 2.0, IntegratorControls{});
    FAIL("expected an integration error");
  } catch (const IntegrationError& e) {
    CHECK_FALSE(e.partial().times.empty());
    CHECK(e.partial().times.back() < 1.0 + 1e-6);
  }
}
