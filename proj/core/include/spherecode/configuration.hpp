#pragma once

#include <Eigen/Core>

namespace spherecode {

/// Maximum tolerated deviation from unit length after construction.
inline constexpr double kUnitNormTolerance = 1e-9;

/// A point on the unit sphere. Construction normalizes the input and rejects
/// vectors too short to carry a direction.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// An ordered set of K points on the unit sphere in R^d, stored as the
/// columns of a d x K matrix. Columns are renormalized on construction, so
/// the unit-length invariant holds for the lifetime of the object.
class SphericalConfiguration {
 public:
  explicit SphericalConfiguration(Eigen::MatrixXd columns);

  Eigen::Index dim() const { return columns_.rows(); }
  Eigen::Index count() const { return columns_.cols(); }
  const Eigen::MatrixXd& matrix() const { return columns_; }

  /// Column k as a vector; throws IndexOutOfRange for invalid k.
  Eigen::VectorXd column(Eigen::Index k) const;

  /// Gram matrix of inner products, K x K.
  Eigen::MatrixXd gram() const { return columns_.transpose() * columns_; }

 private:
  Eigen::MatrixXd columns_;
};

}  // namespace spherecode
