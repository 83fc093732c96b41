#include "spherecode/ufm.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "spherecode/closed_forms.hpp"
#include "spherecode/errors.hpp"
#include "spherecode/manifold.hpp"
#include "spherecode/rng.hpp"
#include "spherecode/solver.hpp"

namespace spherecode {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-16;
constexpr double kMaxStep = 1e6;

void validate_ufm_config(const UfmConfig& config) {
  if (config.dim < 1) {
    throw InvalidConfig("train_ufm: dim must be at least 1");
  }
  if (config.classes < 2) {
    throw InvalidConfig("train_ufm: classes must be at least 2");
  }
  if (config.samples_per_class < 1) {
    throw InvalidConfig("train_ufm: samples_per_class must be at least 1");
  }
  if (!(config.tau > 0.0) || !std::isfinite(config.tau)) {
    throw InvalidConfig("train_ufm: tau must be positive and finite");
  }
  if (config.regime == UfmRegime::kWeightDecay && config.lambda < 0.0) {
    throw InvalidConfig("train_ufm: lambda must be nonnegative");
  }
  if (config.cmf_beta < 0.0 || config.cmf_beta >= 1.0) {
    throw InvalidConfig("train_ufm: cmf_beta must lie in [0, 1)");
  }
  if (config.iters < 1) {
    throw InvalidConfig("train_ufm: iters must be at least 1");
  }
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw InvalidConfig("train_ufm: step_size must be positive and finite");
  }
  if (config.log_every < 1) {
    throw InvalidConfig("train_ufm: log_every must be at least 1");
  }
}

std::vector<int> class_major_labels(int num_classes, int samples_per_class) {
  std::vector<int> labels(static_cast<std::size_t>(num_classes) *
                          samples_per_class);
  for (int k = 0; k < num_classes; ++k) {
    for (int i = 0; i < samples_per_class; ++i) {
      labels[static_cast<std::size_t>(k) * samples_per_class + i] = k;
    }
  }
  return labels;
}

Eigen::MatrixXd class_means_of(const Eigen::MatrixXd& features,
                               const std::vector<int>& labels, int num_classes) {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(features.rows(), num_classes);
  std::vector<long> counts(static_cast<std::size_t>(num_classes), 0);
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    means.col(labels[static_cast<std::size_t>(j)]) += features.col(j);
    ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])];
  }
  for (int k = 0; k < num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) {
      means.col(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
    }
  }
  return means;
}

struct UfmObjective {
  double loss = 0.0;
  Eigen::MatrixXd grad_w;
  Eigen::MatrixXd grad_h;
};

UfmObjective evaluate(const UfmConfig& config, const Eigen::MatrixXd& classifier,
                      const Eigen::MatrixXd& features,
                      const std::vector<int>& labels, bool need_grads) {
  UfmObjective out;
  Eigen::MatrixXd* gw = need_grads ? &out.grad_w : nullptr;
  Eigen::MatrixXd* gh = need_grads ? &out.grad_h : nullptr;
  out.loss = smoothed_ce_gradients(classifier, features, labels, config.tau,
                                   gw, gh);
  if (config.regime == UfmRegime::kWeightDecay && config.lambda > 0.0) {
    out.loss += 0.5 * config.lambda *
                (classifier.squaredNorm() + features.squaredNorm());
    if (need_grads) {
      out.grad_w += config.lambda * classifier;
      out.grad_h += config.lambda * features;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd cmf_update(const Eigen::MatrixXd& classifier,
                           const Eigen::MatrixXd& batch_class_means,
                           double beta, bool renormalize,
                           const std::vector<long>* batch_counts) {
  if (classifier.rows() != batch_class_means.rows() ||
      classifier.cols() != batch_class_means.cols()) {
    throw ShapeMismatch("cmf_update: classifier is " +
                        std::to_string(classifier.rows()) + "x" +
                        std::to_string(classifier.cols()) +
                        " but class means are " +
                        std::to_string(batch_class_means.rows()) + "x" +
                        std::to_string(batch_class_means.cols()));
  }
  if (beta < 0.0 || beta >= 1.0) {
    throw InvalidConfig("cmf_update: beta must lie in [0, 1)");
  }
  if (batch_counts != nullptr &&
      static_cast<Eigen::Index>(batch_counts->size()) != classifier.cols()) {
    throw ShapeMismatch("cmf_update: batch_counts size " +
                        std::to_string(batch_counts->size()) +
                        " does not match " + std::to_string(classifier.cols()) +
                        " classes");
  }
  Eigen::MatrixXd updated = classifier;
  for (Eigen::Index k = 0; k < classifier.cols(); ++k) {
    if (batch_counts != nullptr && (*batch_counts)[static_cast<std::size_t>(k)] == 0) {
      continue;  // No samples for this class in the batch: keep the column.
    }
    updated.col(k) =
        beta * classifier.col(k) + (1.0 - beta) * batch_class_means.col(k);
    if (renormalize) {
      const double norm = updated.col(k).norm();
      if (norm > 0.0) {
        updated.col(k) /= norm;
      }
    }
  }
  return updated;
}

UfmResult train_ufm(const UfmConfig& config) {
  validate_ufm_config(config);
  const bool sphere = config.regime == UfmRegime::kSphere;
  const bool trainable_classifier =
      config.classifier_rule == ClassifierRule::kTrainable;
  const std::vector<int> labels =
      class_major_labels(config.classes, config.samples_per_class);

  SplitRng rng(config.seed, 0);
  Eigen::MatrixXd classifier = rng.unit_columns(config.dim, config.classes);
  Eigen::MatrixXd features = rng.unit_columns(
      config.dim,
      static_cast<Eigen::Index>(config.classes) * config.samples_per_class);

  UfmResult result;
  result.labels = labels;

  const auto record = [&](long iter, double loss) {
    LabeledFeatureSet snapshot(config.classes, labels, features);
    const SphericalConfiguration directions(classifier);
    result.trace.push_back(
        UfmTraceRow{iter, loss, gnc1(snapshot), gnc3(directions, snapshot)});
  };

  double step = config.step_size;
  UfmObjective eval = evaluate(config, classifier, features, labels, true);
  long iter = 0;
  for (; iter < config.iters; ++iter) {
    if (!std::isfinite(eval.loss)) {
      throw NonFiniteLoss("train_ufm: objective not finite at iteration " +
                          std::to_string(iter));
    }
    if (iter % config.log_every == 0) {
      record(iter, eval.loss);
    }

    Eigen::MatrixXd dir_w;
    if (trainable_classifier) {
      dir_w = sphere ? tangent_project(classifier, eval.grad_w) : eval.grad_w;
    } else {
      dir_w = Eigen::MatrixXd::Zero(classifier.rows(), classifier.cols());
    }
    Eigen::MatrixXd dir_h =
        sphere ? tangent_project(features, eval.grad_h) : eval.grad_h;
    const double grad_sq = dir_w.squaredNorm() + dir_h.squaredNorm();
    if (std::sqrt(grad_sq) < config.grad_tol &&
        config.classifier_rule == ClassifierRule::kTrainable) {
      break;
    }

    double alpha = std::min(step * 2.0, kMaxStep);
    bool accepted = false;
    while (alpha >= kMinStep) {
      Eigen::MatrixXd trial_w = classifier - alpha * dir_w;
      Eigen::MatrixXd trial_h = features - alpha * dir_h;
      if (sphere) {
        normalize_columns(trial_w);
        normalize_columns(trial_h);
      }
      const double trial_loss =
          evaluate(config, trial_w, trial_h, labels, false).loss;
      if (std::isfinite(trial_loss) &&
          trial_loss <= eval.loss - kArmijoSlope * alpha * grad_sq) {
        classifier = std::move(trial_w);
        features = std::move(trial_h);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted && trainable_classifier) {
      break;  // No descent available: converged to line-search precision.
    }
    if (accepted) {
      step = alpha;
    }

    if (config.classifier_rule == ClassifierRule::kClassMeanFeature) {
      const Eigen::MatrixXd means =
          class_means_of(features, labels, config.classes);
      classifier = cmf_update(classifier, means, config.cmf_beta, sphere);
    }

    eval = evaluate(config, classifier, features, labels, true);
  }

  if (!std::isfinite(eval.loss)) {
    throw NonFiniteLoss("train_ufm: objective not finite at iteration " +
                        std::to_string(iter));
  }
  if (result.trace.empty() || result.trace.back().iter != iter) {
    record(iter, eval.loss);
  }

  LabeledFeatureSet final_features(config.classes, labels, features);
  std::optional<double> reference;
  if (const auto closed = closed_form_optimum(config.dim, config.classes)) {
    reference = closed->rho_one_vs_rest;
  }
  result.report = compute_gnc_report(classifier, final_features, reference);
  result.classifier = std::move(classifier);
  result.features = std::move(features);
  result.final_loss = eval.loss;
  result.iterations = iter;
  return result;
}

}  // namespace spherecode
