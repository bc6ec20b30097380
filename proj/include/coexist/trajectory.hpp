#pragma once

#include <string>
#include <vector>

#include "coexist/linalg.hpp"

namespace coexist {

struct TrajectoryEvent {
  double time = 0.0;
  std::string label;
};

enum class Termination { HorizonReached, Converged };

// Time-stamped states with one scalar value per state. For full-model
// flows the value is J(x); for reduced-scenario runs it is the
// instantaneous coexistence score.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<double> J_values;
  std::vector<TrajectoryEvent> events;
  Termination termination = Termination::HorizonReached;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  const Vec& terminal() const { return states.back(); }
};

}  // namespace coexist
