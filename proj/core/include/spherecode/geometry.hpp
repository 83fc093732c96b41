#pragma once

#include <vector>

#include <Eigen/Core>

#include "spherecode/configuration.hpp"
#include "spherecode/min_norm.hpp"

namespace spherecode {

/// Threshold below which a point counts as lying inside the complement hull,
/// making its residual direction undefined.
inline constexpr double kDegenerateResidualTolerance = 1e-8;

/// Distance from point k to the convex hull of the remaining points.
/// Zero exactly when the point lies inside that hull.
double one_vs_rest_distance(const SphericalConfiguration& config,
                            Eigen::Index k);

/// Full projection result for point k against the hull of the rest.
MinNormResult one_vs_rest_projection(const SphericalConfiguration& config,
                                     Eigen::Index k);

/// All K one-vs-rest distances in one pass.
Eigen::VectorXd one_vs_rest_distances(const SphericalConfiguration& config);

/// The configuration-level margin: min over k of one_vs_rest_distance(k).
double rho_one_vs_rest(const SphericalConfiguration& config);

/// Minimum pairwise Euclidean distance between distinct points.
double rho_one_vs_one(const SphericalConfiguration& config);

/// Indices whose one-vs-rest distance strictly exceeds (1 + rel_tol) times
/// the configuration minimum. These points can move without changing the
/// margin, which is the usual notion of a rattler.
std::vector<Eigen::Index> detect_rattlers(const SphericalConfiguration& config,
                                          double rel_tol = 1e-4);

/// Unit vector from the hull projection of point k back to point k. This is
/// the feature direction that maximizes the worst-case margin for class k.
/// Throws DegenerateResidual when the residual is shorter than
/// kDegenerateResidualTolerance.
UnitVector optimal_feature_direction(const SphericalConfiguration& config,
                                     Eigen::Index k);

}  // namespace spherecode
