#pragma once

#include <optional>

#include "spherecode/configuration.hpp"

namespace spherecode {

/// K points uniformly spaced on the unit circle, rotated by `phase` radians.
/// Requires K >= 2.
SphericalConfiguration uniform_circle(int count, double phase = 0.0);

/// Simplex equiangular tight frame: K unit vectors in R^d (K <= d + 1) with
/// every pairwise inner product equal to -1/(K-1). Built deterministically
/// from an orthonormal basis of the hyperplane orthogonal to the all-ones
/// direction, so repeated calls give identical matrices.
SphericalConfiguration simplex_etf(int dim, int count);

/// First K vertices of the cross-polytope {±e_i}: the d positive axes
/// followed by K - d negative ones. Requires d + 1 < K <= 2d.
SphericalConfiguration cross_polytope_subset(int dim, int count);

/// A provably optimal configuration together with its one-vs-rest margin,
/// when (d, K) falls in a regime with a known closed form:
///   d == 2          -> uniform circle, margin 1 - cos(2*pi/K)
///   K <= d + 1      -> simplex ETF, margin K/(K-1)
///   d+1 < K <= 2d   -> cross-polytope subset, margin 1
/// Returns nullopt otherwise.
struct ClosedFormOptimum {
  SphericalConfiguration configuration;
  double rho_one_vs_rest;
};
std::optional<ClosedFormOptimum> closed_form_optimum(int dim, int count);

}  // namespace spherecode
