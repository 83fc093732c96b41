#include "spherecode/configuration.hpp"

#include <string>

#include "spherecode/errors.hpp"

namespace spherecode {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1) {
    throw InvalidShape("UnitVector: dimension must be at least 1");
  }
  if (!coords_.allFinite()) {
    throw InvalidShape("UnitVector: coordinates must be finite");
  }
  const double norm = coords_.norm();
  if (norm < 1e-12) {
    throw InvalidShape("UnitVector: cannot normalize a zero vector");
  }
  coords_ /= norm;
}

SphericalConfiguration::SphericalConfiguration(Eigen::MatrixXd columns)
    : columns_(std::move(columns)) {
  if (columns_.rows() < 1 || columns_.cols() < 1) {
    throw InvalidShape("SphericalConfiguration: need at least one point in R^d, d >= 1");
  }
  if (!columns_.allFinite()) {
    throw InvalidShape("SphericalConfiguration: entries must be finite");
  }
  for (Eigen::Index k = 0; k < columns_.cols(); ++k) {
    const double norm = columns_.col(k).norm();
    if (norm < 1e-12) {
      throw InvalidShape("SphericalConfiguration: column " + std::to_string(k) +
                         " has zero norm");
    }
    columns_.col(k) /= norm;
  }
}

Eigen::VectorXd SphericalConfiguration::column(Eigen::Index k) const {
  if (k < 0 || k >= columns_.cols()) {
    throw IndexOutOfRange("SphericalConfiguration: column index " +
                          std::to_string(k) + " out of range [0, " +
                          std::to_string(columns_.cols()) + ")");
  }
  return columns_.col(k);
}

}  // namespace spherecode
