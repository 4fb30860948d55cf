#include "tailwave/leastsq.hpp"

#include <limits>

#include "tailwave/errors.hpp"

namespace tailwave {

LstsqResult lstsq(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs) {
  if (design.rows() != rhs.size()) throw FitError("lstsq: row count mismatch");
  if (design.rows() < design.cols()) throw FitError("lstsq: underdetermined system");

  Eigen::VectorXd scale(design.cols());
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    const double norm = design.col(j).norm();
    scale[j] = norm > 0.0 ? norm : 1.0;
  }
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  const double smax = sv[0];

  LstsqResult result;
  result.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd y = svd.solve(rhs);
  result.coeff = scale.cwiseInverse().asDiagonal() * y;
  result.residual_norm = (design * result.coeff - rhs).norm();
  return result;
}

}  // namespace tailwave
