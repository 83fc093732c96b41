#include "spherecode/closed_forms.hpp"

#include <cmath>
#include <string>

#include "spherecode/errors.hpp"

namespace spherecode {

SphericalConfiguration uniform_circle(int count, double phase) {
  if (count < 2) {
    throw InvalidK("uniform_circle: need at least 2 points, got " +
                   std::to_string(count));
  }
  Eigen::MatrixXd columns(2, count);
  for (int k = 0; k < count; ++k) {
    const double angle = 2.0 * M_PI * k / count + phase;
    columns(0, k) = std::cos(angle);
    columns(1, k) = std::sin(angle);
  }
  return SphericalConfiguration(std::move(columns));
}

SphericalConfiguration simplex_etf(int dim, int count) {
  if (count < 2) {
    throw InvalidK("simplex_etf: need at least 2 points, got " +
                   std::to_string(count));
  }
  if (count > dim + 1) {
    throw InvalidShape("simplex_etf: " + std::to_string(count) +
                       " equiangular points do not fit in dimension " +
                       std::to_string(dim));
  }
  // Helmert-style orthonormal basis of the hyperplane orthogonal to the
  // all-ones vector in R^K. Column j has j leading entries 1/sqrt(j(j+1))
  // followed by -j/sqrt(j(j+1)). The rows of B then give K unit vectors in
  // R^{K-1} with pairwise inner products exactly -1/(K-1) after scaling.
  const int k_count = count;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(k_count, k_count - 1);
  for (int j = 1; j < k_count; ++j) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (int i = 0; i < j; ++i) {
      basis(i, j - 1) = scale;
    }
    basis(j, j - 1) = -static_cast<double>(j) * scale;
  }
  const double radius = std::sqrt(static_cast<double>(k_count) / (k_count - 1));
  Eigen::MatrixXd columns = Eigen::MatrixXd::Zero(dim, k_count);
  columns.topRows(k_count - 1) = radius * basis.transpose();
  return SphericalConfiguration(std::move(columns));
}

SphericalConfiguration cross_polytope_subset(int dim, int count) {
  if (dim < 1) {
    throw InvalidShape("cross_polytope_subset: dimension must be positive");
  }
  if (count <= dim + 1 || count > 2 * dim) {
    throw InvalidShape(
        "cross_polytope_subset: count must satisfy d+1 < K <= 2d, got d=" +
        std::to_string(dim) + " K=" + std::to_string(count));
  }
  Eigen::MatrixXd columns = Eigen::MatrixXd::Zero(dim, count);
  for (int k = 0; k < dim; ++k) {
    columns(k, k) = 1.0;
  }
  for (int k = dim; k < count; ++k) {
    columns(k - dim, k) = -1.0;
  }
  return SphericalConfiguration(std::move(columns));
}

std::optional<ClosedFormOptimum> closed_form_optimum(int dim, int count) {
  if (dim < 1 || count < 2) {
    return std::nullopt;
  }
  if (dim == 2) {
    return ClosedFormOptimum{uniform_circle(count),
                             1.0 - std::cos(2.0 * M_PI / count)};
  }
  if (count <= dim + 1) {
    return ClosedFormOptimum{simplex_etf(dim, count),
                             static_cast<double>(count) / (count - 1)};
  }
  if (count <= 2 * dim) {
    return ClosedFormOptimum{cross_polytope_subset(dim, count), 1.0};
  }
  return std::nullopt;
}

}  // namespace spherecode
