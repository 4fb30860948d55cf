#pragma once

#include <Eigen/Dense>

namespace tailwave {

struct LstsqResult {
  Eigen::VectorXd coeff;
  double residual_norm = 0.0;
  // Condition number of the column-equilibrated design matrix.
  double condition = 0.0;
};

/// Least squares via SVD of the column-equilibrated design matrix. Orthogonal
/// decomposition rather than normal equations: the tail bases span many
/// orders of magnitude and squaring the matrix would waste half the digits.
LstsqResult lstsq(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs);

}  // namespace tailwave
