#pragma once

// Multiplex human-AI coexistence model: reciprocal supply-demand coupling,
// layer operators, system-matrix assembly and the coexistence functional
//
//   J(x) = support^T x - 1/2 x^T A_sys x - sum_i saturation_i / 4 * x_i^4
//
// with its gradient and Hessian.
//
// State layout is fixed everywhere as x = (p, psi, s, r): three N-blocks
// (physical viability, psychological trust, social legitimacy) over all
// N = n_humans + n_ai agents, followed by one n_ai-block of AI
// developmental freedom. d = 3N + n_ai.
//
// Weight folding. The objective is written term by term as
//
//   J = alpha*S + beta*U + gamma*R + delta*D - lambda*C
//
//   S(x) = -1/2 sum_{L in P,Psi,S} x_L^T (alpha_L I + tau_L L_L) x_L
//          -1/2 r^T (alpha_R I + G_R) r - sum_{i in p,psi,s} nu_i/4 x_i^4
//   U(x) = b^T x
//   R(x) = -1/2 x^T G_rev x
//   D(x) = u^T r - 1/2 r^T D_r r - sum_{j in r} nu_j/4 r_j^4 + 1/2 x^T M x
//   C(x) = 1/2 x^T K x
//
// and the assembled (compact) operators carry the weights:
//
//   Q        = blkdiag(alpha(alpha_P I + tau_P L_P), alpha(alpha_Psi I + tau_Psi L_Psi),
//                      alpha(alpha_S I + tau_S L_S), alpha(alpha_R I + G_R) + delta D_r)
//   M        = blkdiag(beta_P W~, beta_Psi W~, beta_S W~, beta_R W_A)
//   A_sys    = Q + gamma G_rev + lambda K - delta M
//   support  = beta b + delta (0, 0, 0, u)
//   saturation_i = alpha nu_i on (p, psi, s), delta nu_i on r
//
// so that the weighted term sum and the compact form agree exactly. The
// mutualistic quadratic is carried by the delta-weighted term because the
// compact matrix couples M with delta. With unit weights every folded
// quantity equals its raw counterpart.

#include <cstdint>
#include <vector>

#include "coexist/linalg.hpp"

namespace coexist {

inline constexpr double kDefaultCompatibilityEpsilon = 1e-9;
inline constexpr double kDefaultSaturation = 1e-3;
inline constexpr double kDefaultSupport = 0.1;

struct AgentPopulation {
  int n_humans = 1;
  int n_ai = 1;

  // Throws DomainError unless n_humans >= 1 and n_ai >= 1.
  static AgentPopulation make(int n_humans, int n_ai);

  int agents() const noexcept { return n_humans + n_ai; }
  int dim() const noexcept { return 3 * agents() + n_ai; }

  // Offsets of the four blocks inside x.
  int p_offset() const noexcept { return 0; }
  int psi_offset() const noexcept { return agents(); }
  int s_offset() const noexcept { return 2 * agents(); }
  int r_offset() const noexcept { return 3 * agents(); }
};

struct MultiplexState {
  Vec p;
  Vec psi;
  Vec s;
  Vec r;

  static MultiplexState from_vector(const AgentPopulation& pop, const Vec& x);
  Vec concat() const;
};

struct SupplyDemandProfile {
  Vec demand;
  Vec supply;

  // Throws on empty, mismatched or negative vectors.
  void validate() const;
  Eigen::Index resources() const noexcept { return demand.size(); }
};

struct ContactNetwork {
  Mat contact;  // n_humans x n_ai, entries in [0, 1]
};

struct MutualisticNetwork {
  Mat W;        // n_humans x n_ai effective weights
  Mat W_tilde;  // N x N bipartite embedding
  Mat W_A;      // n_ai x n_ai AI-AI cooperation (zero unless configured)
};

struct LayerOperators {
  Mat L_P;
  Mat L_Psi;
  Mat L_S;
  Mat G_R;  // governance on AI developmental coordinates
};

struct ObjectiveWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double delta = 1.0;
  double lambda = 1.0;
  bool operator==(const ObjectiveWeights&) const = default;
};

// Empty matrices/vectors are filled at assembly: G_rev, K, D_r -> zero,
// u_dev -> zero, nu -> kDefaultSaturation, b -> kDefaultSupport.
struct CoexistenceParameters {
  ObjectiveWeights weights;
  double alpha_P = 1.0, alpha_Psi = 1.0, alpha_S = 1.0, alpha_R = 1.0;
  double tau_P = 0.0, tau_Psi = 0.0, tau_S = 0.0;
  double beta_P = 1.0, beta_Psi = 1.0, beta_S = 1.0, beta_R = 1.0;
  Mat G_rev;  // d x d PSD
  Mat K;      // d x d PSD
  Vec u_dev;  // n_ai
  Mat D_r;    // n_ai x n_ai PSD
  Vec nu;     // d, nonnegative
  Vec b;      // d
};

class CoexistenceModel {
 public:
  const AgentPopulation& population() const noexcept { return population_; }
  const CoexistenceParameters& params() const noexcept { return params_; }
  const LayerOperators& layers() const noexcept { return layers_; }
  const MutualisticNetwork& network() const noexcept { return network_; }

  const Mat& Q() const noexcept { return Q_; }
  const Mat& M() const noexcept { return M_; }
  const Mat& A_sys() const noexcept { return A_; }
  const Vec& support() const noexcept { return support_; }
  const Vec& saturation() const noexcept { return saturation_; }

  int dim() const noexcept { return population_.dim(); }

  // Q + gamma G_rev + lambda K, the regulated part of A_sys.
  Mat regulation() const;

 private:
  friend CoexistenceModel assemble_model(const AgentPopulation&, CoexistenceParameters,
                                         const LayerOperators&, const MutualisticNetwork&);
  AgentPopulation population_;
  CoexistenceParameters params_;
  LayerOperators layers_;
  MutualisticNetwork network_;
  Mat Q_, M_, A_;
  Vec support_, saturation_;
};

double reciprocal_compatibility(const SupplyDemandProfile& human, const SupplyDemandProfile& ai,
                                double epsilon = kDefaultCompatibilityEpsilon);

// n_humans x n_ai matrix of reciprocal_compatibility scores.
Mat compatibility_matrix(const std::vector<SupplyDemandProfile>& humans,
                         const std::vector<SupplyDemandProfile>& ais,
                         double epsilon = kDefaultCompatibilityEpsilon);

// w_ij = a_ij m_ij. Fills W; W_tilde is the embedding of W and W_A is zero.
MutualisticNetwork effective_weights(const Mat& compat, const ContactNetwork& contacts);

Mat embed_bipartite(const Mat& W);

Mat build_layer_laplacian(const Mat& adjacency);

enum class Topology { Complete, Ring, Random };

// Symmetric nonnegative adjacency with zero diagonal. `edge_probability`
// and `seed` are used by Topology::Random only.
Mat make_adjacency(Topology kind, int nodes, double weight = 1.0, double edge_probability = 0.5,
                   std::uint64_t seed = 0);

CoexistenceModel assemble_model(const AgentPopulation& population, CoexistenceParameters params,
                                const LayerOperators& layers, const MutualisticNetwork& network);

double eval_J(const CoexistenceModel& model, const Vec& x);
double eval_J(const CoexistenceModel& model, const MultiplexState& x);

double eval_term_S(const CoexistenceModel& model, const Vec& x);
double eval_term_U(const CoexistenceModel& model, const Vec& x);
double eval_term_R(const CoexistenceModel& model, const Vec& x);
double eval_term_D(const CoexistenceModel& model, const Vec& x);
double eval_term_C(const CoexistenceModel& model, const Vec& x);

Vec eval_grad_J(const CoexistenceModel& model, const Vec& x);
Mat eval_hessian_J(const CoexistenceModel& model, const Vec& x);

}  // namespace coexist
