#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical code: each oracle is written from the
// defining formula with plain loops so that agreement is meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "coexist/model.hpp"
#include "coexist/scenario.hpp"

namespace oracle {

using coexist::Mat;
using coexist::Vec;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double compatibility(const Vec& dH, const Vec& uH, const Vec& dA, const Vec& uA, double eps) {
  return 0.5 * (dot(dH, uA) / (norm(dH) * norm(uA) + eps) + dot(dA, uH) / (norm(dA) * norm(uH) + eps));
}

inline double quad(const Mat& m, const Vec& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += x[i] * m(i, j) * x[j];
  return s;
}

inline Vec slice(const Vec& x, int off, int n) {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = x[off + i];
  return out;
}

inline Mat laplacian(const Mat& adj) {
  const Eigen::Index n = adj.rows();
  Mat L = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double deg = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      deg += adj(i, j);
      L(i, j) = -adj(i, j);
    }
    L(i, i) = deg;
  }
  return L;
}

// Raw (unweighted) terms from their definitions.
struct Terms {
  double S = 0.0, U = 0.0, R = 0.0, D = 0.0, C = 0.0;
};

inline Terms raw_terms(const coexist::CoexistenceModel& model, const Vec& x) {
  const auto& pop = model.population();
  const auto& p = model.params();
  const auto& lay = model.layers();
  const auto& net = model.network();
  const int N = pop.agents(), m = pop.n_ai;
  const Vec xp = slice(x, pop.p_offset(), N), xpsi = slice(x, pop.psi_offset(), N), xs = slice(x, pop.s_offset(), N),
            r = slice(x, pop.r_offset(), m);
  auto self = [&](double a, double tau, const Mat& L, const Vec& v) {
    Mat op = tau * L;
    for (int i = 0; i < v.size(); ++i) op(i, i) += a;
    return quad(op, v);
  };
  Terms t;
  Mat rr = lay.G_R;
  for (int i = 0; i < m; ++i) rr(i, i) += p.alpha_R;
  t.S = -0.5 * (self(p.alpha_P, p.tau_P, lay.L_P, xp) + self(p.alpha_Psi, p.tau_Psi, lay.L_Psi, xpsi) +
                self(p.alpha_S, p.tau_S, lay.L_S, xs) + quad(rr, r));
  for (int i = 0; i < 3 * N; ++i) t.S -= p.nu[i] / 4.0 * std::pow(x[i], 4);
  t.U = dot(p.b, x);
  t.R = -0.5 * quad(p.G_rev, x);
  double mut = p.beta_P * quad(net.W_tilde, xp) + p.beta_Psi * quad(net.W_tilde, xpsi) +
               p.beta_S * quad(net.W_tilde, xs) + p.beta_R * quad(net.W_A, r);
  t.D = dot(p.u_dev, r) - 0.5 * quad(p.D_r, r) + 0.5 * mut;
  for (int j = 0; j < m; ++j) t.D -= p.nu[3 * N + j] / 4.0 * std::pow(r[j], 4);
  t.C = 0.5 * quad(p.K, x);
  return t;
}

inline double weighted_sum(const coexist::ObjectiveWeights& w, const Terms& t) {
  return w.alpha * t.S + w.beta * t.U + w.gamma * t.R + w.delta * t.D - w.lambda * t.C;
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    J.col(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return J;
}

// Real root of nu x^3 + a x = b for a, nu >= 0 by bisection.
inline double cubic_root(double a, double nu, double b) {
  double lo = 0.0, hi = 1.0;
  const double s = b >= 0 ? 1.0 : -1.0;
  const double target = std::abs(b);
  while (nu * hi * hi * hi + a * hi < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (nu * mid * mid * mid + a * mid < target ? lo : hi) = mid;
  }
  return s * 0.5 * (lo + hi);
}

// Positive root of c R^4 - a R^2 - half_b2 = 0.
inline double quartic_radius(double half_b2, double a, double c) {
  double lo = 0.0, hi = 1.0;
  auto f = [&](double R) { return c * R * R * R * R - a * R * R - half_b2; };
  while (f(hi) < 0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::array<double, 4> reduced_rates(double H, double A, double g, double C, const coexist::ReducedParameters& p) {
  const double dH = p.r_H * H * (1.0 - H / p.K_H) + p.mu_H * H * A / (p.h_sat + A) - p.kappa_H * C * H;
  const double dA =
      p.r_A * A * (1.0 - A / p.K_A) + p.mu_A * A * H / (p.h_sat + H) - p.g_brake * g * A - p.kappa_A * C * A;
  const double dg = p.g_gain * H * (p.g_cap - g) - p.g_decay * g;
  const double dC = p.c_0 + p.c_asym * std::abs(A - H) - (p.d_C * g + p.d_C0) * C;
  return {dH, dA, dg, dC};
}

inline double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

inline double coexistence_from_normalized(double nH, double nA, double ng, double nC) {
  return std::cbrt(clip01(nH) * clip01(nA) * clip01(ng)) * (1.0 - clip01(nC));
}

inline double domination_from_normalized(double nH, double nA, double ng) {
  return clip01(clip01(nA) - std::min(clip01(nH), clip01(ng)));
}

// Trapezoidal average of f over the time grid.
inline double trapezoid_mean(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return s / (t.back() - t.front());
}

inline Mat inverse2(const Mat& a) {
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Mat inv(2, 2);
  inv << a(1, 1) / det, -a(0, 1) / det, -a(1, 0) / det, a(0, 0) / det;
  return inv;
}

}  // namespace oracle
