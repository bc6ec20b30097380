#pragma once

// Small hand-built models for the unit tests.

#include "coexist/model.hpp"

namespace fixture {

using namespace coexist;

inline LayerOperators zero_layers(const AgentPopulation& pop) {
  const int N = pop.agents();
  return LayerOperators{Mat::Zero(N, N), Mat::Zero(N, N), Mat::Zero(N, N), Mat::Zero(pop.n_ai, pop.n_ai)};
}

inline MutualisticNetwork zero_network(const AgentPopulation& pop) {
  return effective_weights(Mat::Zero(pop.n_humans, pop.n_ai),
                           ContactNetwork{Mat::Zero(pop.n_humans, pop.n_ai)});
}

// A_sys = a I, saturation nu, support b on every coordinate: each
// coordinate evolves as an independent scalar system.
inline CoexistenceModel diagonal_model(double a, double nu, double b, int n_humans = 1, int n_ai = 1) {
  const AgentPopulation pop = AgentPopulation::make(n_humans, n_ai);
  CoexistenceParameters p;
  p.alpha_P = p.alpha_Psi = p.alpha_S = p.alpha_R = a;
  p.nu = Vec::Constant(pop.dim(), nu);
  p.b = Vec::Constant(pop.dim(), b);
  return assemble_model(pop, p, zero_layers(pop), zero_network(pop));
}

// One human, one AI, one resource, a single mutualistic edge of weight w.
inline CoexistenceModel single_edge_model(double w, CoexistenceParameters p = {}) {
  const AgentPopulation pop = AgentPopulation::make(1, 1);
  if (p.nu.size() == 0) p.nu = Vec::Zero(pop.dim());
  MutualisticNetwork net = effective_weights(Mat::Constant(1, 1, w), ContactNetwork{Mat::Constant(1, 1, 1.0)});
  return assemble_model(pop, p, zero_layers(pop), net);
}

}  // namespace fixture
