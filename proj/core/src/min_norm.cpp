#include "spherecode/min_norm.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spherecode/errors.hpp"

namespace spherecode {

namespace {

// Weights below this threshold are treated as inactive and dropped from the
// corral during the minor cycle.
constexpr double kInteriorEps = 1e-12;

// Minimizer of ||Z a|| over affine combinations (sum a = 1) of the columns
// of Z. Parametrized as a = e_0 + D b with D columns e_i - e_0, which turns
// the problem into an unconstrained least squares solved by SVD. The SVD
// also handles affinely dependent corrals, returning the least-norm b.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& z) {
  const Eigen::Index s = z.cols();
  if (s == 1) {
    return Eigen::VectorXd::Ones(1);
  }
  Eigen::MatrixXd dirs = z.rightCols(s - 1).colwise() - z.col(0);
  const Eigen::VectorXd rhs = -z.col(0);
  const Eigen::VectorXd b =
      dirs.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  Eigen::VectorXd a(s);
  a(0) = 1.0 - b.sum();
  a.tail(s - 1) = b;
  return a;
}

}  // namespace

MinNormResult min_norm_projection(const Eigen::VectorXd& query,
                                  const Eigen::MatrixXd& hull_points) {
  const Eigen::Index dim = query.size();
  const Eigen::Index m = hull_points.cols();
  if (m == 0) {
    throw EmptyHull("min_norm_projection: hull point set is empty");
  }
  if (hull_points.rows() != dim) {
    throw DimensionMismatch("min_norm_projection: query has dimension " +
                            std::to_string(dim) + " but hull points have " +
                            std::to_string(hull_points.rows()));
  }
  if (!query.allFinite() || !hull_points.allFinite()) {
    throw InvalidShape("min_norm_projection: inputs must be finite");
  }

  // Work in coordinates centered at the query: minimize ||x|| over
  // x in conv{z_j}, z_j = p_j - query.
  Eigen::MatrixXd z = hull_points.colwise() - query;

  double max_sq = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    max_sq = std::max(max_sq, z.col(j).squaredNorm());
  }
  const double scale = std::max(1.0, max_sq);
  const double eps_stop = 1e-12 * scale;

  Eigen::Index start = 0;
  double best_sq = z.col(0).squaredNorm();
  for (Eigen::Index j = 1; j < m; ++j) {
    const double sq = z.col(j).squaredNorm();
    if (sq < best_sq) {
      best_sq = sq;
      start = j;
    }
  }

  std::vector<Eigen::Index> corral = {start};
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = z.col(start);

  const auto corral_matrix = [&]() {
    Eigen::MatrixXd zs(dim, static_cast<Eigen::Index>(corral.size()));
    for (std::size_t i = 0; i < corral.size(); ++i) {
      zs.col(static_cast<Eigen::Index>(i)) = z.col(corral[i]);
    }
    return zs;
  };

  const int max_major = static_cast<int>(16 * m + 64);
  for (int major = 0; major < max_major; ++major) {
    const double x_sq = x.squaredNorm();
    if (x_sq <= eps_stop) {
      break;  // The query lies in the hull.
    }

    double t_min = std::numeric_limits<double>::infinity();
    Eigen::Index j_star = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double t = x.dot(z.col(j));
      if (t < t_min) {
        t_min = t;
        j_star = j;
      }
    }
    // Wolfe's optimality criterion: no hull point improves on x.
    if (x_sq - t_min <= eps_stop) {
      break;
    }

    bool already_in = false;
    for (const Eigen::Index j : corral) {
      if (j == j_star) {
        already_in = true;
        break;
      }
    }
    if (!already_in) {
      corral.push_back(j_star);
      lam.conservativeResize(lam.size() + 1);
      lam(lam.size() - 1) = 0.0;
    }

    // Minor cycle: move to the affine minimizer of the corral, dropping
    // points whose weight would turn negative, until the minimizer is a
    // proper convex combination.
    const int max_minor = static_cast<int>(corral.size()) + 8;
    for (int minor = 0; minor < max_minor; ++minor) {
      Eigen::MatrixXd zs = corral_matrix();
      Eigen::VectorXd alpha = affine_minimizer(zs);
      if ((alpha.array() > kInteriorEps).all()) {
        lam = alpha;
        x = zs * alpha;
        break;
      }
      double theta = 1.0;
      Eigen::Index drop = -1;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha(i) <= kInteriorEps) {
          const double denom = lam(i) - alpha(i);
          if (denom > 0.0) {
            const double t = lam(i) / denom;
            if (t < theta) {
              theta = t;
              drop = i;
            }
          }
        }
      }
      if (drop < 0) {
        // Degenerate geometry: accept the clamped minimizer and stop.
        lam = alpha.cwiseMax(0.0);
        const double sum = lam.sum();
        if (sum > 0.0) {
          lam /= sum;
        }
        x = zs * lam;
        break;
      }
      lam = (1.0 - theta) * lam + theta * alpha;
      lam(drop) = 0.0;
      std::vector<Eigen::Index> next_corral;
      std::vector<double> next_lam;
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > kInteriorEps) {
          next_corral.push_back(corral[static_cast<std::size_t>(i)]);
          next_lam.push_back(lam(i));
        }
      }
      if (next_corral.empty()) {
        next_corral.push_back(corral[static_cast<std::size_t>(drop)]);
        next_lam.push_back(1.0);
      }
      corral = std::move(next_corral);
      lam = Eigen::Map<Eigen::VectorXd>(next_lam.data(),
                                        static_cast<Eigen::Index>(next_lam.size()));
      const double sum = lam.sum();
      if (sum > 0.0) {
        lam /= sum;
      }
      x = corral_matrix() * lam;
    }

    // Stall guard: re-optimizing an unchanged corral means floating point
    // has run out of progress to make.
    if (already_in && x.squaredNorm() >= x_sq - 1e-18 * scale) {
      break;
    }
  }

  MinNormResult result;
  result.weights = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < corral.size(); ++i) {
    result.weights(corral[i]) += std::max(0.0, lam(static_cast<Eigen::Index>(i)));
  }
  const double weight_sum = result.weights.sum();
  if (weight_sum > 0.0) {
    result.weights /= weight_sum;
  }
  result.projection = hull_points * result.weights;
  result.distance = (query - result.projection).norm();
  return result;
}

MinNormResult min_norm_projection(
    const Eigen::VectorXd& query,
    const std::vector<Eigen::VectorXd>& hull_points) {
  if (hull_points.empty()) {
    throw EmptyHull("min_norm_projection: hull point set is empty");
  }
  Eigen::MatrixXd columns(query.size(),
                          static_cast<Eigen::Index>(hull_points.size()));
  for (std::size_t j = 0; j < hull_points.size(); ++j) {
    if (hull_points[j].size() != query.size()) {
      throw DimensionMismatch("min_norm_projection: hull point " +
                              std::to_string(j) + " has dimension " +
                              std::to_string(hull_points[j].size()) +
                              " but query has " + std::to_string(query.size()));
    }
    columns.col(static_cast<Eigen::Index>(j)) = hull_points[j];
  }
  return min_norm_projection(query, columns);
}

}  // namespace spherecode
