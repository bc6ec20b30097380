#include "coexist/instances.hpp"

#include <algorithm>
#include <random>

#include "coexist/dynamics.hpp"
#include "coexist/error.hpp"
#include "coexist/seed.hpp"

namespace coexist {

namespace {

struct Draw {
  std::mt19937_64 rng;
  explicit Draw(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  Vec vec(Eigen::Index n, double lo, double hi) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
};

struct Blueprint {
  AgentPopulation pop;
  CoexistenceParameters params;
  LayerOperators layers;
  MutualisticNetwork network;

  CoexistenceModel build(double delta) const {
    CoexistenceParameters p = params;
    p.weights.delta = delta;
    return assemble_model(pop, p, layers, network);
  }
};

// Path-graph Laplacian-type governance: nonpositive off-diagonal entries.
Mat laplacian_governance(int m, Draw& draw) {
  Mat adj = Mat::Zero(m, m);
  for (int i = 0; i + 1 < m; ++i) adj(i, i + 1) = adj(i + 1, i) = draw.uniform(0.1, 1.0);
  Mat G = build_layer_laplacian(adj);
  G.diagonal().array() += draw.uniform(0.0, 0.5);
  return G;
}

Blueprint draw_blueprint(std::uint64_t seed, const InstanceOptions& opt) {
  if (opt.max_dim < 4) throw DomainError("instances need max_dim >= 4");
  Draw draw(seed);
  const bool z_matrix = opt.kind == InstanceKind::MMatrix;

  // Population sizes with 3 (n + m) + m <= max_dim.
  const int m = draw.integer(1, std::max(1, std::min(3, (opt.max_dim - 3) / 4)));
  const int n_max = std::max(1, (opt.max_dim - 4 * m) / 3);
  const int n = draw.integer(1, std::min(4, n_max));

  Blueprint bp;
  bp.pop = AgentPopulation::make(n, m);
  const int N = n + m, d = bp.pop.dim();

  const int k = draw.integer(1, 4);
  std::vector<SupplyDemandProfile> humans(n), ais(m);
  for (auto* group : {&humans, &ais})
    for (auto& prof : *group) prof = SupplyDemandProfile{draw.vec(k, 0.0, 1.0), draw.vec(k, 0.0, 1.0)};
  ContactNetwork contact{Mat(n, m)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) contact.contact(i, j) = draw.uniform(0.0, 1.0);
  bp.network = effective_weights(compatibility_matrix(humans, ais), contact);
  if (!z_matrix && draw.uniform(0.0, 1.0) < 0.5) {
    Mat WA = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) WA(i, j) = WA(j, i) = draw.uniform(0.0, 0.5);
    bp.network.W_A = WA;
  }

  const Topology topologies[3] = {Topology::Complete, Topology::Ring, Topology::Random};
  Mat* laps[3] = {&bp.layers.L_P, &bp.layers.L_Psi, &bp.layers.L_S};
  for (Mat* L : laps) {
    const Topology t = topologies[draw.integer(0, 2)];
    *L = build_layer_laplacian(make_adjacency(t, N, draw.uniform(0.2, 1.0), 0.5, draw.rng()));
  }
  bp.layers.G_R = z_matrix ? laplacian_governance(m, draw) : random_psd(m, 1.0, draw.rng());

  auto& p = bp.params;
  p.weights = ObjectiveWeights{draw.uniform(0.5, 1.5), draw.uniform(0.5, 1.5), draw.uniform(0.5, 1.5),
                               1.0, draw.uniform(0.5, 1.5)};
  p.alpha_P = draw.uniform(0.5, 1.5);
  p.alpha_Psi = draw.uniform(0.5, 1.5);
  p.alpha_S = draw.uniform(0.5, 1.5);
  p.alpha_R = draw.uniform(0.5, 1.5);
  p.tau_P = draw.uniform(0.0, 0.5);
  p.tau_Psi = draw.uniform(0.0, 0.5);
  p.tau_S = draw.uniform(0.0, 0.5);
  p.beta_P = draw.uniform(0.5, 1.5);
  p.beta_Psi = draw.uniform(0.5, 1.5);
  p.beta_S = draw.uniform(0.5, 1.5);
  p.beta_R = draw.uniform(0.5, 1.5);
  if (z_matrix) {
    p.G_rev = draw.vec(d, 0.0, 0.3).asDiagonal();
    p.K = draw.vec(d, 0.0, 0.3).asDiagonal();
    p.D_r = draw.vec(m, 0.0, 0.5).asDiagonal();
    p.u_dev = draw.vec(m, 0.0, 1.0);
    p.b = draw.vec(d, 0.0, 1.0);
  } else {
    p.G_rev = random_psd(d, 0.3, draw.rng());
    p.K = random_psd(d, 0.3, draw.rng());
    p.D_r = random_psd(m, 0.5, draw.rng());
    p.u_dev = draw.vec(m, -1.0, 1.0);
    p.b = draw.vec(d, -1.0, 1.0);
  }
  p.nu = draw.vec(d, opt.saturation_lo, opt.saturation_hi);
  return bp;
}

}  // namespace

Mat random_psd(int n, double scale, std::uint64_t seed) {
  Draw draw(seed);
  Mat B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = draw.uniform(-scale, scale);
  Mat P = B.transpose() * B / static_cast<double>(n);
  return 0.5 * (P + P.transpose());
}

CoexistenceModel random_instance(std::uint64_t seed, const InstanceOptions& opt) {
  const Blueprint bp = draw_blueprint(seed, opt);
  Draw draw(splitmix64(seed));
  double delta = draw.uniform(0.5, 1.5);
  CoexistenceModel model = bp.build(delta);

  switch (opt.kind) {
    case InstanceKind::Unconstrained:
      return model;
    case InstanceKind::SpectrallyStable:
    case InstanceKind::MMatrix:
      for (int it = 0; it < 200; ++it) {
        const SpectralReport s = check_spectral_condition(model);
        if (s.holds && s.margin >= 0.5 * s.lhs) return model;
        delta *= 0.5;
        model = bp.build(delta);
      }
      break;
    case InstanceKind::Indefinite:
      for (int it = 0; it < 60; ++it) {
        if (min_eigenvalue(model.A_sys()) < 0.0) return model;
        delta *= 2.0;
        model = bp.build(delta);
      }
      break;
  }
  throw NumericalError("could not reach the requested spectral structure");
}

ProfileSet baseline_analogue_profiles() {
  ProfileSet ps{std::vector<SupplyDemandProfile>(4), std::vector<SupplyDemandProfile>(2)};
  ps.humans[0] = {(Vec(3) << 1.0, 0.5, 0.2).finished(), (Vec(3) << 0.3, 0.8, 0.4).finished()};
  ps.humans[1] = {(Vec(3) << 0.6, 1.0, 0.1).finished(), (Vec(3) << 0.5, 0.2, 0.9).finished()};
  ps.humans[2] = {(Vec(3) << 0.2, 0.4, 1.0).finished(), (Vec(3) << 0.9, 0.3, 0.3).finished()};
  ps.humans[3] = {(Vec(3) << 0.8, 0.3, 0.6).finished(), (Vec(3) << 0.4, 0.6, 0.5).finished()};
  ps.ais[0] = {(Vec(3) << 0.4, 0.7, 0.5).finished(), (Vec(3) << 0.9, 0.6, 0.3).finished()};
  ps.ais[1] = {(Vec(3) << 0.7, 0.2, 0.8).finished(), (Vec(3) << 0.3, 0.5, 1.0).finished()};
  return ps;
}

CoexistenceModel baseline_analogue() {
  const int n = 4, m = 2;
  const AgentPopulation pop = AgentPopulation::make(n, m);
  const int N = n + m;
  const ProfileSet ps = baseline_analogue_profiles();
  ContactNetwork contact{Mat::Constant(n, m, 0.4)};
  const MutualisticNetwork net = effective_weights(compatibility_matrix(ps.humans, ps.ais), contact);

  LayerOperators layers;
  const Mat L = build_layer_laplacian(make_adjacency(Topology::Complete, N));
  layers.L_P = layers.L_Psi = layers.L_S = L;
  layers.G_R = 0.5 * Mat::Identity(m, m);

  CoexistenceParameters p;
  p.tau_P = p.tau_Psi = p.tau_S = 0.1;
  p.G_rev = 0.1 * Mat::Identity(pop.dim(), pop.dim());
  p.K = 0.1 * Mat::Identity(pop.dim(), pop.dim());
  p.u_dev = Vec::Constant(m, 0.1);
  p.D_r = 0.1 * Mat::Identity(m, m);
  return assemble_model(pop, p, layers, net);
}

}  // namespace coexist
