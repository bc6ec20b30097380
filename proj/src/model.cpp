#include "coexist/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "coexist/error.hpp"

namespace coexist {

namespace {

void require_dim(const CoexistenceModel& model, const Vec& x) {
  if (x.size() != model.dim())
    throw DimensionError("state has dimension " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.dim()));
}

void require_square(const Mat& m, Eigen::Index n, const char* name) {
  if (m.rows() != n || m.cols() != n)
    throw DimensionError(std::string(name) + " must be " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
}

void require_psd(const Mat& m, const char* name) {
  if (!is_psd(m)) throw DomainError(std::string(name) + " must be symmetric positive semidefinite");
}

Mat fill_square(const Mat& m, Eigen::Index n) { return m.size() == 0 ? Mat::Zero(n, n) : m; }

Vec fill_vector(const Vec& v, Eigen::Index n, double value) {
  return v.size() == 0 ? Vec::Constant(n, value) : v;
}

// Clamped to [0, 1 - ulp/2]: rounding can otherwise reach 1 when epsilon is
// negligible against the norm product.
double cosine_term(const Vec& demand, const Vec& supply, double epsilon) {
  const double c = demand.dot(supply) / (demand.norm() * supply.norm() + epsilon);
  return std::clamp(c, 0.0, std::nextafter(1.0, 0.0));
}

}  // namespace

AgentPopulation AgentPopulation::make(int n_humans, int n_ai) {
  if (n_humans < 1) throw DomainError("n_humans must be >= 1");
  if (n_ai < 1) throw DomainError("n_ai must be >= 1");
  return AgentPopulation{n_humans, n_ai};
}

MultiplexState MultiplexState::from_vector(const AgentPopulation& pop, const Vec& x) {
  if (x.size() != pop.dim()) throw DimensionError("state vector does not match population");
  const int n = pop.agents();
  return MultiplexState{x.segment(pop.p_offset(), n), x.segment(pop.psi_offset(), n),
                        x.segment(pop.s_offset(), n), x.segment(pop.r_offset(), pop.n_ai)};
}

Vec MultiplexState::concat() const {
  if (p.size() != psi.size() || p.size() != s.size())
    throw DimensionError("layer blocks of a multiplex state must have equal length");
  Vec x(p.size() * 3 + r.size());
  x << p, psi, s, r;
  return x;
}

void SupplyDemandProfile::validate() const {
  if (demand.size() == 0) throw DimensionError("profile needs at least one resource dimension");
  if (demand.size() != supply.size())
    throw DimensionError("demand and supply vectors differ in length");
  if ((demand.array() < 0.0).any() || (supply.array() < 0.0).any())
    throw DomainError("demand and supply entries must be nonnegative");
  if (!demand.allFinite() || !supply.allFinite()) throw DomainError("profile entries must be finite");
}

double reciprocal_compatibility(const SupplyDemandProfile& human, const SupplyDemandProfile& ai,
                                double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  human.validate();
  ai.validate();
  if (human.resources() != ai.resources())
    throw DimensionError("human and AI profiles have different resource dimensions");
  return 0.5 * (cosine_term(human.demand, ai.supply, epsilon) +
                cosine_term(ai.demand, human.supply, epsilon));
}

Mat compatibility_matrix(const std::vector<SupplyDemandProfile>& humans,
                         const std::vector<SupplyDemandProfile>& ais, double epsilon) {
  Mat m(static_cast<Eigen::Index>(humans.size()), static_cast<Eigen::Index>(ais.size()));
  for (std::size_t i = 0; i < humans.size(); ++i)
    for (std::size_t j = 0; j < ais.size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          reciprocal_compatibility(humans[i], ais[j], epsilon);
  return m;
}

MutualisticNetwork effective_weights(const Mat& compat, const ContactNetwork& contacts) {
  const Mat& a = contacts.contact;
  if (compat.rows() != a.rows() || compat.cols() != a.cols())
    throw DimensionError("compatibility and contact matrices differ in shape");
  if ((compat.array() < 0.0).any() || (compat.array() >= 1.0).any())
    throw DomainError("compatibility entries must lie in [0, 1)");
  if ((a.array() < 0.0).any() || (a.array() > 1.0).any())
    throw DomainError("contact intensities must lie in [0, 1]");
  MutualisticNetwork net;
  net.W = a.cwiseProduct(compat);
  net.W_tilde = embed_bipartite(net.W);
  net.W_A = Mat::Zero(a.cols(), a.cols());
  return net;
}

Mat embed_bipartite(const Mat& W) {
  const Eigen::Index n = W.rows(), m = W.cols();
  Mat out = Mat::Zero(n + m, n + m);
  out.topRightCorner(n, m) = W;
  out.bottomLeftCorner(m, n) = W.transpose();
  return out;
}

Mat build_layer_laplacian(const Mat& adjacency) {
  if (adjacency.rows() != adjacency.cols()) throw DimensionError("adjacency must be square");
  if (!is_symmetric(adjacency)) throw DomainError("adjacency must be symmetric");
  if ((adjacency.array() < 0.0).any()) throw DomainError("adjacency entries must be nonnegative");
  if (adjacency.diagonal().cwiseAbs().maxCoeff() > 0.0)
    throw DomainError("adjacency must have a zero diagonal");
  Mat L = -adjacency;
  L.diagonal() = adjacency.rowwise().sum();
  return L;
}

Mat make_adjacency(Topology kind, int nodes, double weight, double edge_probability,
                   std::uint64_t seed) {
  if (nodes < 1) throw DomainError("topology needs at least one node");
  if (!(weight >= 0.0)) throw DomainError("edge weight must be nonnegative");
  Mat adj = Mat::Zero(nodes, nodes);
  switch (kind) {
    case Topology::Complete:
      adj.setConstant(weight);
      adj.diagonal().setZero();
      break;
    case Topology::Ring:
      for (int i = 0; i < nodes && nodes > 1; ++i) {
        const int j = (i + 1) % nodes;
        adj(i, j) = adj(j, i) = weight;
      }
      break;
    case Topology::Random: {
      if (edge_probability < 0.0 || edge_probability > 1.0)
        throw DomainError("edge probability must lie in [0, 1]");
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (int i = 0; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j)
          if (unif(rng) < edge_probability) adj(i, j) = adj(j, i) = weight;
      break;
    }
  }
  return adj;
}

Mat CoexistenceModel::regulation() const {
  const auto& w = params_.weights;
  return Q_ + w.gamma * params_.G_rev + w.lambda * params_.K;
}

CoexistenceModel assemble_model(const AgentPopulation& population, CoexistenceParameters params,
                                const LayerOperators& layers, const MutualisticNetwork& network) {
  const AgentPopulation pop = AgentPopulation::make(population.n_humans, population.n_ai);
  const Eigen::Index N = pop.agents(), m = pop.n_ai, d = pop.dim();

  const auto& w = params.weights;
  for (double v : {w.alpha, w.beta, w.gamma, w.delta, w.lambda})
    if (!(v >= 0.0)) throw DomainError("objective weights must be nonnegative");
  for (double v : {params.alpha_P, params.alpha_Psi, params.alpha_S, params.alpha_R})
    if (!(v > 0.0)) throw DomainError("self-regulation coefficients alpha_* must be positive");
  for (double v : {params.tau_P, params.tau_Psi, params.tau_S})
    if (!(v >= 0.0)) throw DomainError("diffusion coefficients tau_* must be nonnegative");
  for (double v : {params.beta_P, params.beta_Psi, params.beta_S, params.beta_R})
    if (!(v >= 0.0)) throw DomainError("utility block weights beta_* must be nonnegative");

  params.G_rev = fill_square(params.G_rev, d);
  params.K = fill_square(params.K, d);
  params.D_r = fill_square(params.D_r, m);
  params.u_dev = fill_vector(params.u_dev, m, 0.0);
  params.nu = fill_vector(params.nu, d, kDefaultSaturation);
  params.b = fill_vector(params.b, d, kDefaultSupport);

  require_square(params.G_rev, d, "G_rev");
  require_square(params.K, d, "K");
  require_square(params.D_r, m, "D_r");
  if (params.u_dev.size() != m) throw DimensionError("u_dev must have one entry per AI agent");
  if (params.nu.size() != d) throw DimensionError("nu must have length d");
  if (params.b.size() != d) throw DimensionError("b must have length d");
  if ((params.nu.array() < 0.0).any()) throw DomainError("saturation nu must be nonnegative");
  require_psd(params.G_rev, "G_rev");
  require_psd(params.K, "K");
  require_psd(params.D_r, "D_r");

  require_square(layers.L_P, N, "L_P");
  require_square(layers.L_Psi, N, "L_Psi");
  require_square(layers.L_S, N, "L_S");
  require_square(layers.G_R, m, "G_R");
  for (const Mat* L : {&layers.L_P, &layers.L_Psi, &layers.L_S}) {
    require_psd(*L, "layer Laplacian");
    if (L->rowwise().sum().cwiseAbs().maxCoeff() > 1e-10)
      throw DomainError("layer Laplacian rows must sum to zero");
  }
  require_psd(layers.G_R, "G_R");

  if (network.W.rows() != pop.n_humans || network.W.cols() != pop.n_ai)
    throw DimensionError("mutualistic weights must be n_humans x n_ai");
  MutualisticNetwork net = network;
  net.W_tilde = embed_bipartite(net.W);
  net.W_A = fill_square(net.W_A, m);
  require_square(net.W_A, m, "W_A");
  if (!is_symmetric(net.W_A) || (net.W_A.array() < 0.0).any())
    throw DomainError("W_A must be symmetric and nonnegative");

  const Mat I_N = Mat::Identity(N, N);
  const Mat I_m = Mat::Identity(m, m);
  const Mat qP = w.alpha * (params.alpha_P * I_N + params.tau_P * layers.L_P);
  const Mat qPsi = w.alpha * (params.alpha_Psi * I_N + params.tau_Psi * layers.L_Psi);
  const Mat qS = w.alpha * (params.alpha_S * I_N + params.tau_S * layers.L_S);
  const Mat qR = w.alpha * (params.alpha_R * I_m + layers.G_R) + w.delta * params.D_r;

  const Mat mP = params.beta_P * net.W_tilde;
  const Mat mPsi = params.beta_Psi * net.W_tilde;
  const Mat mS = params.beta_S * net.W_tilde;
  const Mat mR = params.beta_R * net.W_A;

  CoexistenceModel model;
  model.population_ = pop;
  model.layers_ = layers;
  model.network_ = std::move(net);
  model.Q_ = block_diagonal({&qP, &qPsi, &qS, &qR});
  model.M_ = block_diagonal({&mP, &mPsi, &mS, &mR});
  model.A_ = model.Q_ + w.gamma * params.G_rev + w.lambda * params.K - w.delta * model.M_;
  // Symmetrize away rounding so downstream symmetric solvers see an exact
  // symmetric matrix.
  model.A_ = 0.5 * (model.A_ + model.A_.transpose()).eval();

  model.support_ = w.beta * params.b;
  model.support_.tail(m) += w.delta * params.u_dev;
  model.saturation_ = w.alpha * params.nu;
  model.saturation_.tail(m) = w.delta * params.nu.tail(m);

  model.params_ = std::move(params);
  return model;
}

double eval_J(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  const double quartic = (model.saturation().array() * x.array().pow(4)).sum() / 4.0;
  return model.support().dot(x) - 0.5 * x.dot(model.A_sys() * x) - quartic;
}

double eval_J(const CoexistenceModel& model, const MultiplexState& x) {
  return eval_J(model, x.concat());
}

double eval_term_S(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  const auto& pop = model.population();
  const auto& prm = model.params();
  const auto& lay = model.layers();
  const int N = pop.agents(), m = pop.n_ai, r0 = pop.r_offset();
  auto layer = [&](int offset, double a, double tau, const Mat& L) {
    const auto v = x.segment(offset, N);
    return v.dot(a * v + tau * (L * v));
  };
  const auto r = x.segment(r0, m);
  double q = layer(pop.p_offset(), prm.alpha_P, prm.tau_P, lay.L_P) +
             layer(pop.psi_offset(), prm.alpha_Psi, prm.tau_Psi, lay.L_Psi) +
             layer(pop.s_offset(), prm.alpha_S, prm.tau_S, lay.L_S) +
             r.dot(prm.alpha_R * r + lay.G_R * r);
  const double quartic =
      (prm.nu.head(r0).array() * x.head(r0).array().pow(4)).sum() / 4.0;
  return -0.5 * q - quartic;
}

double eval_term_U(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  return model.params().b.dot(x);
}

double eval_term_R(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  return -0.5 * x.dot(model.params().G_rev * x);
}

double eval_term_D(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  const auto& prm = model.params();
  const int m = model.population().n_ai;
  const auto r = x.tail(m);
  const double quartic = (prm.nu.tail(m).array() * r.array().pow(4)).sum() / 4.0;
  return prm.u_dev.dot(r) - 0.5 * r.dot(prm.D_r * r) - quartic + 0.5 * x.dot(model.M() * x);
}

double eval_term_C(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  return 0.5 * x.dot(model.params().K * x);
}

Vec eval_grad_J(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  return model.support() - model.A_sys() * x -
         (model.saturation().array() * x.array().cube()).matrix();
}

Mat eval_hessian_J(const CoexistenceModel& model, const Vec& x) {
  require_dim(model, x);
  Mat h = -model.A_sys();
  h.diagonal() -= (3.0 * model.saturation().array() * x.array().square()).matrix();
  return h;
}

}  // namespace coexist
