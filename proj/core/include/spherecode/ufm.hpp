#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "spherecode/metrics.hpp"

namespace spherecode {

/// How the feature and classifier blocks are constrained during training.
enum class UfmRegime {
  kSphere,       // both blocks renormalized to unit columns every step
  kWeightDecay,  // unconstrained, L2 penalty on both blocks
};

/// How the classifier evolves: by gradient descent, or tracking an
/// exponential moving average of the class-mean features.
enum class ClassifierRule { kTrainable, kClassMeanFeature };

struct UfmConfig {
  int dim = 2;
  int classes = 2;
  int samples_per_class = 1;
  UfmRegime regime = UfmRegime::kSphere;
  double tau = 1.0;      // cross-entropy temperature
  double lambda = 0.0;   // weight-decay strength (kWeightDecay only)
  ClassifierRule classifier_rule = ClassifierRule::kTrainable;
  double cmf_beta = 0.9;  // EMA coefficient for kClassMeanFeature
  int iters = 5000;
  double step_size = 1.0;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;
  int log_every = 10;
};

struct UfmTraceRow {
  long iter = 0;
  double loss = 0.0;
  double gnc1 = 0.0;
  double gnc3 = 0.0;
};

struct UfmResult {
  Eigen::MatrixXd classifier;  // d x K, raw (unnormalized in decay regime)
  Eigen::MatrixXd features;    // d x nK
  std::vector<int> labels;
  GncReport report;
  std::vector<UfmTraceRow> trace;
  double final_loss = 0.0;
  long iterations = 0;
};

/// Trains the free-feature model from a seeded random start and reports the
/// collapse metrics of the final state. Throws NonFiniteLoss (with the
/// iteration index) if the objective ever leaves the reals.
UfmResult train_ufm(const UfmConfig& config);

/// One classifier update under the class-mean-feature rule:
/// W <- beta * W + (1 - beta) * M, optionally renormalizing columns to unit
/// length afterwards. Classes with a zero batch count (when `batch_counts`
/// is supplied) keep their previous column.
Eigen::MatrixXd cmf_update(const Eigen::MatrixXd& classifier,
                           const Eigen::MatrixXd& batch_class_means,
                           double beta, bool renormalize = false,
                           const std::vector<long>* batch_counts = nullptr);

}  // namespace spherecode
