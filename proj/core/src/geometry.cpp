#include "spherecode/geometry.hpp"

#include <limits>
#include <string>

#include "spherecode/errors.hpp"

namespace spherecode {

namespace {

void check_index(const SphericalConfiguration& config, Eigen::Index k,
                 const char* where) {
  if (k < 0 || k >= config.count()) {
    throw IndexOutOfRange(std::string(where) + ": index " + std::to_string(k) +
                          " out of range [0, " + std::to_string(config.count()) +
                          ")");
  }
}

Eigen::MatrixXd complement_columns(const SphericalConfiguration& config,
                                   Eigen::Index k) {
  const Eigen::Index count = config.count();
  Eigen::MatrixXd rest(config.dim(), count - 1);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < count; ++j) {
    if (j != k) {
      rest.col(out++) = config.matrix().col(j);
    }
  }
  return rest;
}

}  // namespace

MinNormResult one_vs_rest_projection(const SphericalConfiguration& config,
                                     Eigen::Index k) {
  check_index(config, k, "one_vs_rest_projection");
  if (config.count() < 2) {
    throw EmptyHull("one_vs_rest_projection: need at least two points");
  }
  return min_norm_projection(config.column(k), complement_columns(config, k));
}

double one_vs_rest_distance(const SphericalConfiguration& config,
                            Eigen::Index k) {
  return one_vs_rest_projection(config, k).distance;
}

Eigen::VectorXd one_vs_rest_distances(const SphericalConfiguration& config) {
  Eigen::VectorXd distances(config.count());
  for (Eigen::Index k = 0; k < config.count(); ++k) {
    distances(k) = one_vs_rest_distance(config, k);
  }
  return distances;
}

double rho_one_vs_rest(const SphericalConfiguration& config) {
  return one_vs_rest_distances(config).minCoeff();
}

double rho_one_vs_one(const SphericalConfiguration& config) {
  if (config.count() < 2) {
    throw EmptyHull("rho_one_vs_one: need at least two points");
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < config.count(); ++a) {
    for (Eigen::Index b = a + 1; b < config.count(); ++b) {
      best = std::min(best,
                      (config.matrix().col(a) - config.matrix().col(b)).norm());
    }
  }
  return best;
}

std::vector<Eigen::Index> detect_rattlers(const SphericalConfiguration& config,
                                          double rel_tol) {
  if (rel_tol < 0.0) {
    throw InvalidConfig("detect_rattlers: rel_tol must be nonnegative");
  }
  const Eigen::VectorXd distances = one_vs_rest_distances(config);
  const double rho = distances.minCoeff();
  std::vector<Eigen::Index> rattlers;
  for (Eigen::Index k = 0; k < distances.size(); ++k) {
    if (distances(k) > (1.0 + rel_tol) * rho) {
      rattlers.push_back(k);
    }
  }
  return rattlers;
}

UnitVector optimal_feature_direction(const SphericalConfiguration& config,
                                     Eigen::Index k) {
  const MinNormResult projection = one_vs_rest_projection(config, k);
  if (projection.distance <= kDegenerateResidualTolerance) {
    throw DegenerateResidual(
        "optimal_feature_direction: point " + std::to_string(k) +
        " lies in the hull of the others (distance " +
        std::to_string(projection.distance) + ")");
  }
  return UnitVector((config.column(k) - projection.projection) /
                    projection.distance);
}

}  // namespace spherecode
