#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spherecode::testing {
namespace {

// Distance from query to the affine-least-squares point of the subset given
// by `mask`, or +inf if the affine solution leaves the simplex face.
double subset_distance(const Eigen::VectorXd& query,
                       const Eigen::MatrixXd& points, std::uint32_t mask) {
  std::vector<int> idx;
  for (int j = 0; j < points.cols(); ++j) {
    if (mask & (1u << j)) {
      idx.push_back(j);
    }
  }
  const int m = static_cast<int>(idx.size());
  if (m == 1) {
    return (query - points.col(idx[0])).norm();
  }
  // Parameterize affine combinations of the subset relative to its first
  // point and solve the unconstrained least squares; weights must then be
  // nonnegative for the solution to lie on this face.
  Eigen::MatrixXd basis(points.rows(), m - 1);
  for (int j = 1; j < m; ++j) {
    basis.col(j - 1) = points.col(idx[j]) - points.col(idx[0]);
  }
  const Eigen::VectorXd rhs = query - points.col(idx[0]);
  const Eigen::VectorXd coeffs =
      basis.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd weights(m);
  weights(0) = 1.0 - coeffs.sum();
  weights.tail(m - 1) = coeffs;
  // Tiny negative weights are accepted: rank-deficient subsets admit many
  // representations and the decomposition may return one that grazes zero.
  if ((weights.array() < -1e-12).any()) {
    return std::numeric_limits<double>::infinity();
  }
  Eigen::VectorXd point = Eigen::VectorXd::Zero(points.rows());
  for (int j = 0; j < m; ++j) {
    point += weights(j) * points.col(idx[j]);
  }
  return (query - point).norm();
}

}  // namespace

double oracle_hull_distance_faces(const Eigen::VectorXd& query,
                                  const Eigen::MatrixXd& points) {
  if (points.cols() < 1 || points.cols() > 20) {
    throw std::invalid_argument("oracle_hull_distance_faces: bad point count");
  }
  const std::uint32_t full = (1u << points.cols()) - 1u;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    best = std::min(best, subset_distance(query, points, mask));
  }
  return best;
}

double oracle_hull_distance_grid(const Eigen::VectorXd& query,
                                 const Eigen::MatrixXd& points,
                                 double final_step) {
  const int m = static_cast<int>(points.cols());
  auto value = [&](const Eigen::VectorXd& w) {
    return (points * w - query).squaredNorm();
  };
  // Start from the best single vertex and from the centroid; keep whichever
  // pattern search ends lower.
  Eigen::VectorXd best_w = Eigen::VectorXd::Zero(m);
  {
    int best_vertex = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double dist = (points.col(j) - query).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best_vertex = j;
      }
    }
    best_w(best_vertex) = 1.0;
  }
  Eigen::VectorXd centroid = Eigen::VectorXd::Constant(m, 1.0 / m);
  double best_val = std::numeric_limits<double>::infinity();
  for (Eigen::VectorXd w : {best_w, centroid}) {
    double val = value(w);
    // Pairwise mass exchanges w_i -> w_i + step, w_j -> w_j - step span the
    // feasible directions of the simplex; halving the step refines the
    // nominal grid locally until the quadratic is resolved.
    for (double step = 0.5; step >= final_step; step *= 0.5) {
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            if (i == j || w(j) < step) {
              continue;
            }
            Eigen::VectorXd trial = w;
            trial(i) += step;
            trial(j) -= step;
            const double trial_val = value(trial);
            if (trial_val < val - 1e-18) {
              w = trial;
              val = trial_val;
              improved = true;
            }
          }
        }
      }
    }
    best_val = std::min(best_val, val);
  }
  return std::sqrt(std::max(best_val, 0.0));
}

double oracle_certificate_gap(const Eigen::VectorXd& query,
                              const Eigen::VectorXd& projection,
                              const Eigen::MatrixXd& points) {
  const Eigen::VectorXd residual = query - projection;
  double gap = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < points.cols(); ++j) {
    gap = std::max(gap, residual.dot(points.col(j) - projection));
  }
  return gap;
}

double oracle_hardmax(const Eigen::MatrixXd& classifier,
                      const Eigen::MatrixXd& features,
                      const std::vector<int>& labels) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < features.cols(); ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    for (int k = 0; k < classifier.cols(); ++k) {
      if (k == label) {
        continue;
      }
      const double margin =
          (classifier.col(k) - classifier.col(label)).dot(features.col(j));
      worst = std::max(worst, margin);
    }
  }
  return worst;
}

double oracle_smoothed_ce(const Eigen::MatrixXd& classifier,
                          const Eigen::MatrixXd& features,
                          const std::vector<int>& labels, double tau) {
  long double total = 0.0L;
  for (int j = 0; j < features.cols(); ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    long double inner = 0.0L;
    for (int k = 0; k < classifier.cols(); ++k) {
      if (k == label) {
        continue;
      }
      const double margin =
          (classifier.col(k) - classifier.col(label)).dot(features.col(j));
      inner += std::exp(static_cast<long double>(margin / tau));
    }
    total += std::log(1.0L + inner);
  }
  return static_cast<double>(total / features.cols());
}

double oracle_min_pairwise_distance(const Eigen::MatrixXd& points) {
  const Eigen::MatrixXd gram = points.transpose() * points;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points.cols(); ++i) {
    for (int j = i + 1; j < points.cols(); ++j) {
      const double sq = gram(i, i) - 2.0 * gram(i, j) + gram(j, j);
      best = std::min(best, std::sqrt(std::max(sq, 0.0)));
    }
  }
  return best;
}

double oracle_max_pairwise_cosine(const Eigen::MatrixXd& points) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points.cols(); ++i) {
    for (int j = i + 1; j < points.cols(); ++j) {
      worst = std::max(worst, points.col(i).dot(points.col(j)));
    }
  }
  return worst;
}

Eigen::MatrixXd random_gaussian(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      out(r, c) = dist(gen);
    }
  }
  return out;
}

Eigen::MatrixXd random_unit_columns(std::mt19937_64& gen, int rows, int cols) {
  Eigen::MatrixXd out = random_gaussian(gen, rows, cols);
  for (int c = 0; c < cols; ++c) {
    double norm = out.col(c).norm();
    while (norm < 1e-8) {
      out.col(c) = random_gaussian(gen, rows, 1);
      norm = out.col(c).norm();
    }
    out.col(c) /= norm;
  }
  return out;
}

std::vector<int> random_labels(std::mt19937_64& gen, int num_classes,
                               int count) {
  std::uniform_int_distribution<int> dist(0, num_classes - 1);
  std::vector<int> labels(static_cast<std::size_t>(count));
  for (auto& label : labels) {
    label = dist(gen);
  }
  return labels;
}

}  // namespace spherecode::testing
