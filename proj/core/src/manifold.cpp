#include "spherecode/manifold.hpp"

#include "spherecode/errors.hpp"

namespace spherecode {

Eigen::MatrixXd tangent_project(const Eigen::MatrixXd& points,
                                const Eigen::MatrixXd& grad) {
  if (points.rows() != grad.rows() || points.cols() != grad.cols()) {
    throw ShapeMismatch("tangent_project: points and gradient shapes differ");
  }
  Eigen::MatrixXd out = grad;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    out.col(j) -= points.col(j).dot(grad.col(j)) * points.col(j);
  }
  return out;
}

void normalize_columns(Eigen::MatrixXd& points) {
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const double norm = points.col(j).norm();
    if (norm > 0.0) {
      points.col(j) /= norm;
    }
  }
}

}  // namespace spherecode
