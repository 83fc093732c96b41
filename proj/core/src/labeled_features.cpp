#include "spherecode/labeled_features.hpp"

#include <string>
#include <utility>

#include "spherecode/errors.hpp"

namespace spherecode {

LabeledFeatureSet::LabeledFeatureSet(int num_classes, std::vector<int> labels,
                                     Eigen::MatrixXd features)
    : num_classes_(num_classes),
      labels_(std::move(labels)),
      features_(std::move(features)) {
  if (num_classes_ < 1) {
    throw InvalidConfig("LabeledFeatureSet: num_classes must be positive");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != features_.cols()) {
    throw ShapeMismatch("LabeledFeatureSet: " + std::to_string(labels_.size()) +
                        " labels for " + std::to_string(features_.cols()) +
                        " feature columns");
  }
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw InvalidShape("LabeledFeatureSet: feature matrix must be nonempty");
  }
  if (!features_.allFinite()) {
    throw InvalidShape("LabeledFeatureSet: features must be finite");
  }
  counts_.assign(num_classes_, 0);
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    const int label = labels_[j];
    if (label < 0 || label >= num_classes_) {
      throw LabelOutOfRange("LabeledFeatureSet: label " + std::to_string(label) +
                            " at sample " + std::to_string(j) +
                            " outside [0, " + std::to_string(num_classes_) + ")");
    }
    ++counts_[label];
  }
  for (int k = 0; k < num_classes_; ++k) {
    if (counts_[k] == 0) {
      throw InvalidConfig("LabeledFeatureSet: class " + std::to_string(k) +
                          " has no samples");
    }
  }
}

LabeledFeatureSet LabeledFeatureSet::aligned(
    const SphericalConfiguration& directions, int samples_per_class) {
  if (samples_per_class < 1) {
    throw InvalidConfig("LabeledFeatureSet::aligned: samples_per_class must be positive");
  }
  const Eigen::Index k_count = directions.count();
  Eigen::MatrixXd features(directions.dim(), k_count * samples_per_class);
  std::vector<int> labels(static_cast<std::size_t>(k_count) * samples_per_class);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    for (int i = 0; i < samples_per_class; ++i) {
      const Eigen::Index j = k * samples_per_class + i;
      features.col(j) = directions.matrix().col(k);
      labels[static_cast<std::size_t>(j)] = static_cast<int>(k);
    }
  }
  return LabeledFeatureSet(static_cast<int>(k_count), std::move(labels),
                           std::move(features));
}

Eigen::MatrixXd LabeledFeatureSet::class_means() const {
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(features_.rows(), num_classes_);
  for (std::size_t j = 0; j < labels_.size(); ++j) {
    means.col(labels_[j]) += features_.col(static_cast<Eigen::Index>(j));
  }
  for (int k = 0; k < num_classes_; ++k) {
    means.col(k) /= static_cast<double>(counts_[k]);
  }
  return means;
}

}  // namespace spherecode
