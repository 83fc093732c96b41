#pragma once

#include <vector>

#include <Eigen/Core>

#include "spherecode/configuration.hpp"

namespace spherecode {

/// Feature vectors with integer class labels, stored as the columns of a
/// d x N matrix. Every class in [0, num_classes) must own at least one
/// sample so that per-class means are defined.
class LabeledFeatureSet {
 public:
  LabeledFeatureSet(int num_classes, std::vector<int> labels,
                    Eigen::MatrixXd features);

  /// Features equal to their class direction, replicated n times per class.
  static LabeledFeatureSet aligned(const SphericalConfiguration& directions,
                                   int samples_per_class);

  int num_classes() const { return num_classes_; }
  Eigen::Index dim() const { return features_.rows(); }
  Eigen::Index size() const { return features_.cols(); }
  const std::vector<int>& labels() const { return labels_; }
  const Eigen::MatrixXd& matrix() const { return features_; }
  const std::vector<long>& class_counts() const { return counts_; }

  /// Per-class sample means as a d x K matrix.
  Eigen::MatrixXd class_means() const;

 private:
  int num_classes_;
  std::vector<int> labels_;
  std::vector<long> counts_;
  Eigen::MatrixXd features_;
};

}  // namespace spherecode
