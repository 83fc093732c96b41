#pragma once

#include <vector>

#include <Eigen/Core>

namespace spherecode {

/// Result of projecting a query point onto the convex hull of a point set.
/// The projection is always expressed through its hull weights, so
/// `projection == hull_points * weights` holds by construction and the
/// weights form a probability vector over the hull points.
struct MinNormResult {
  Eigen::VectorXd projection;
  Eigen::VectorXd weights;
  double distance = 0.0;
};

/// Exact Euclidean projection onto conv{hull_points} via Wolfe's
/// min-norm-point active-set method. `hull_points` stores one point per
/// column. Throws EmptyHull for an empty set and DimensionMismatch when the
/// query and hull dimensions disagree.
MinNormResult min_norm_projection(const Eigen::VectorXd& query,
                                  const Eigen::MatrixXd& hull_points);

MinNormResult min_norm_projection(const Eigen::VectorXd& query,
                                  const std::vector<Eigen::VectorXd>& hull_points);

}  // namespace spherecode
