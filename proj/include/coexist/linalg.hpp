#pragma once

#include <Eigen/Dense>

namespace coexist {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

bool is_symmetric(const Mat& m, double tol = 1e-12);

// Eigenvalues of a symmetric matrix in ascending order.
Vec symmetric_eigenvalues(const Mat& m);

double min_eigenvalue(const Mat& m);
double max_eigenvalue(const Mat& m);

// Operator 2-norm of a symmetric matrix (largest |eigenvalue|).
double spectral_norm(const Mat& m);

// PSD up to a scale-relative tolerance: lambda_min >= -tol * max(1, ||m||).
bool is_psd(const Mat& m, double tol = 1e-10);

Mat block_diagonal(std::initializer_list<const Mat*> blocks);

}  // namespace coexist
