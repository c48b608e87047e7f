#pragma once

#include <Eigen/Dense>

namespace fibscope {

/// Number of singular values above tol * sigma_max; 0 for the zero matrix.
int numerical_rank(const Eigen::MatrixXd& m, double tol);
int numerical_rank(const Eigen::MatrixXcd& m, double tol);

/// Rows scaled to unit length; zero rows stay zero.
Eigen::MatrixXd normalize_rows(Eigen::MatrixXd m);

/// Smallest singular value (min(rows, cols)-th); 0 for empty input.
double sigma_min(const Eigen::MatrixXcd& m);

}  // namespace fibscope
