#include "coexist/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "coexist/error.hpp"

namespace coexist {

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol) return false;
  return true;
}

Vec symmetric_eigenvalues(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  if (m.rows() == 0) return Vec();
  Eigen::SelfAdjointEigenSolver<Mat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigen-solver failed");
  return solver.eigenvalues();
}

double min_eigenvalue(const Mat& m) {
  const Vec ev = symmetric_eigenvalues(m);
  return ev.size() ? ev(0) : 0.0;
}

double max_eigenvalue(const Mat& m) {
  const Vec ev = symmetric_eigenvalues(m);
  return ev.size() ? ev(ev.size() - 1) : 0.0;
}

double spectral_norm(const Mat& m) {
  const Vec ev = symmetric_eigenvalues(m);
  if (ev.size() == 0) return 0.0;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

bool is_psd(const Mat& m, double tol) {
  if (!is_symmetric(m, 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))) return false;
  const Vec ev = symmetric_eigenvalues(m);
  if (ev.size() == 0) return true;
  const double scale = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
  return ev(0) >= -tol * scale;
}

Mat block_diagonal(std::initializer_list<const Mat*> blocks) {
  Eigen::Index n = 0;
  for (const Mat* b : blocks) n += b->rows();
  Mat out = Mat::Zero(n, n);
  Eigen::Index off = 0;
  for (const Mat* b : blocks) {
    out.block(off, off, b->rows(), b->cols()) = *b;
    off += b->rows();
  }
  return out;
}

}  // namespace coexist
