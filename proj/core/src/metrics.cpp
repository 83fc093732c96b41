#include "spherecode/metrics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "spherecode/errors.hpp"
#include "spherecode/geometry.hpp"

namespace spherecode {

namespace {

constexpr double kPinvCutoffRatio = 1e-10;
constexpr double kZeroNormTolerance = 1e-12;

// Moore-Penrose pseudoinverse of a symmetric PSD matrix, dropping singular
// values below kPinvCutoffRatio times the largest.
Eigen::MatrixXd psd_pseudoinverse(const Eigen::MatrixXd& matrix,
                                  bool* degenerate) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff =
      sigma.size() > 0 ? kPinvCutoffRatio * sigma(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inv(i) = 1.0 / sigma(i);
      ++rank;
    }
  }
  if (degenerate != nullptr) {
    *degenerate = (rank == 0);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

void check_class_counts(const SphericalConfiguration& classifier,
                        const LabeledFeatureSet& features, const char* where) {
  if (classifier.count() != features.num_classes()) {
    throw ShapeMismatch(std::string(where) + ": classifier has " +
                        std::to_string(classifier.count()) +
                        " classes but features have " +
                        std::to_string(features.num_classes()));
  }
  if (classifier.dim() != features.dim()) {
    throw DimensionMismatch(std::string(where) + ": classifier dimension " +
                            std::to_string(classifier.dim()) +
                            " but feature dimension " +
                            std::to_string(features.dim()));
  }
}

}  // namespace

VariabilityCollapse gnc1_detailed(const LabeledFeatureSet& features,
                                  bool center_global_mean) {
  const Eigen::Index dim = features.dim();
  const Eigen::Index n_samples = features.size();
  const int k_count = features.num_classes();
  const Eigen::MatrixXd means = features.class_means();

  Eigen::MatrixXd sigma_w = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < n_samples; ++j) {
    const Eigen::VectorXd dev =
        features.matrix().col(j) - means.col(features.labels()[j]);
    sigma_w.noalias() += dev * dev.transpose();
  }
  sigma_w /= static_cast<double>(n_samples);

  Eigen::MatrixXd centered_means = means;
  if (center_global_mean) {
    const Eigen::VectorXd global = means.rowwise().mean();
    centered_means.colwise() -= global;
  }
  Eigen::MatrixXd sigma_b = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < k_count; ++k) {
    sigma_b.noalias() += centered_means.col(k) * centered_means.col(k).transpose();
  }
  sigma_b /= static_cast<double>(k_count);

  VariabilityCollapse out;
  Eigen::MatrixXd pinv = psd_pseudoinverse(sigma_b, &out.degenerate_between_class);
  if (out.degenerate_between_class) {
    out.value = 0.0;
    return out;
  }
  out.value = (sigma_w * pinv).trace() / static_cast<double>(k_count);
  return out;
}

double gnc1(const LabeledFeatureSet& features, bool center_global_mean) {
  return gnc1_detailed(features, center_global_mean).value;
}

MarginReport gnc2(const SphericalConfiguration& classifier,
                  std::optional<double> reference) {
  MarginReport report;
  report.rho = rho_one_vs_rest(classifier);
  if (reference.has_value()) {
    report.gap = *reference - report.rho;
  }
  return report;
}

double gnc3(const SphericalConfiguration& classifier,
            const LabeledFeatureSet& features) {
  check_class_counts(classifier, features, "gnc3");
  const Eigen::MatrixXd means = features.class_means();
  double total = 0.0;
  for (Eigen::Index k = 0; k < classifier.count(); ++k) {
    const double norm = means.col(k).norm();
    if (norm < kZeroNormTolerance) {
      throw ZeroNormClass("gnc3: class " + std::to_string(k) +
                          " has a zero-length mean");
    }
    total += 1.0 - classifier.matrix().col(k).dot(means.col(k)) / norm;
  }
  return total / static_cast<double>(classifier.count());
}

double ncc_accuracy(const LabeledFeatureSet& features,
                    const Eigen::MatrixXd& centers) {
  if (centers.rows() != features.dim()) {
    throw DimensionMismatch("ncc_accuracy: centers have dimension " +
                            std::to_string(centers.rows()) +
                            " but features have " +
                            std::to_string(features.dim()));
  }
  if (centers.cols() != features.num_classes()) {
    throw ShapeMismatch("ncc_accuracy: " + std::to_string(centers.cols()) +
                        " centers for " +
                        std::to_string(features.num_classes()) + " classes");
  }
  long correct = 0;
  for (Eigen::Index j = 0; j < features.size(); ++j) {
    int arg = 0;
    double best = (features.matrix().col(j) - centers.col(0)).squaredNorm();
    for (Eigen::Index k = 1; k < centers.cols(); ++k) {
      const double dist =
          (features.matrix().col(j) - centers.col(k)).squaredNorm();
      if (dist < best) {  // strict: ties keep the lowest index
        best = dist;
        arg = static_cast<int>(k);
      }
    }
    if (arg == features.labels()[static_cast<std::size_t>(j)]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

double ncc_accuracy(const LabeledFeatureSet& features) {
  return ncc_accuracy(features, features.class_means());
}

LengthDiagnostics length_diagnostics(const Eigen::MatrixXd& classifier,
                                     const Eigen::MatrixXd& class_means) {
  if (classifier.rows() != class_means.rows() ||
      classifier.cols() != class_means.cols()) {
    throw ShapeMismatch("length_diagnostics: classifier and class-mean shapes differ");
  }
  const Eigen::Index k_count = classifier.cols();
  LengthDiagnostics out;
  out.class_mean_norms.reserve(static_cast<std::size_t>(k_count));
  out.classifier_norms.reserve(static_cast<std::size_t>(k_count));
  out.ratios.reserve(static_cast<std::size_t>(k_count));
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double classifier_norm = classifier.col(k).norm();
    if (classifier_norm < kZeroNormTolerance) {
      throw ZeroNormClass("length_diagnostics: classifier column " +
                          std::to_string(k) + " has zero norm");
    }
    const double mean_norm = class_means.col(k).norm();
    out.classifier_norms.push_back(classifier_norm);
    out.class_mean_norms.push_back(mean_norm);
    out.ratios.push_back(mean_norm / classifier_norm);
  }
  double mean_ratio = 0.0;
  for (const double r : out.ratios) {
    mean_ratio += r;
  }
  mean_ratio /= static_cast<double>(k_count);
  double variance = 0.0;
  for (const double r : out.ratios) {
    variance += (r - mean_ratio) * (r - mean_ratio);
  }
  variance /= static_cast<double>(k_count);
  out.coefficient_of_variation =
      mean_ratio > 0.0 ? std::sqrt(variance) / mean_ratio : 0.0;
  return out;
}

GncReport compute_gnc_report(const Eigen::MatrixXd& classifier,
                             const LabeledFeatureSet& features,
                             std::optional<double> reference) {
  const SphericalConfiguration directions(classifier);
  check_class_counts(directions, features, "compute_gnc_report");

  GncReport report;
  report.gnc1 = gnc1(features);
  const MarginReport margin = gnc2(directions, reference);
  report.gnc2 = margin.rho;
  report.gnc2_reference = reference;
  report.gnc3 = gnc3(directions, features);
  report.ncc_accuracy = ncc_accuracy(features);
  const LengthDiagnostics lengths =
      length_diagnostics(classifier, features.class_means());
  report.class_mean_norms = lengths.class_mean_norms;
  report.classifier_norms = lengths.classifier_norms;
  report.norm_ratio_cv = lengths.coefficient_of_variation;
  return report;
}

}  // namespace spherecode
