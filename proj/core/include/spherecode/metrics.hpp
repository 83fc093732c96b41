#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "spherecode/configuration.hpp"
#include "spherecode/labeled_features.hpp"

namespace spherecode {

/// Within-class variability relative to between-class spread:
/// tr(Sigma_W Sigma_B^+) / K, with Sigma_B built from raw (uncentered)
/// class means. `degenerate_between_class` flags a rank-zero Sigma_B, in
/// which case the value is 0 by convention rather than an error.
struct VariabilityCollapse {
  double value = 0.0;
  bool degenerate_between_class = false;
};

VariabilityCollapse gnc1_detailed(const LabeledFeatureSet& features,
                                  bool center_global_mean = false);

double gnc1(const LabeledFeatureSet& features, bool center_global_mean = false);

/// One-vs-rest margin of the classifier; `gap` is reference - rho when a
/// numeric optimum for the same (d, K) is supplied.
struct MarginReport {
  double rho = 0.0;
  std::optional<double> gap;
};

MarginReport gnc2(const SphericalConfiguration& classifier,
                  std::optional<double> reference = std::nullopt);

/// Misalignment between the classifier and unit-normalized class means:
/// (1/K) sum_k (1 - <w_k, hbar_k / ||hbar_k||>), which lies in [0, 2].
/// Throws ZeroNormClass when a class mean vanishes.
double gnc3(const SphericalConfiguration& classifier,
            const LabeledFeatureSet& features);

/// Fraction of samples whose nearest class mean carries their own label.
/// Ties resolve to the lowest class index.
double ncc_accuracy(const LabeledFeatureSet& features);

/// Same rule against explicit centers (one column per class).
double ncc_accuracy(const LabeledFeatureSet& features,
                    const Eigen::MatrixXd& centers);

/// Norms of class means and classifier columns plus the coefficient of
/// variation of their per-class ratios. A CV near zero indicates the
/// configuration treats every class at a common scale.
struct LengthDiagnostics {
  std::vector<double> class_mean_norms;
  std::vector<double> classifier_norms;
  std::vector<double> ratios;
  double coefficient_of_variation = 0.0;
};

LengthDiagnostics length_diagnostics(const Eigen::MatrixXd& classifier,
                                     const Eigen::MatrixXd& class_means);

/// Bundle of every collapse metric for one (classifier, features) pair.
struct GncReport {
  double gnc1 = 0.0;
  double gnc2 = 0.0;
  std::optional<double> gnc2_reference;
  double gnc3 = 0.0;
  double ncc_accuracy = 0.0;
  std::vector<double> class_mean_norms;
  std::vector<double> classifier_norms;
  double norm_ratio_cv = 0.0;
};

/// Computes the full report. The classifier may have arbitrary column
/// norms; margin and alignment metrics use its column-normalized copy while
/// the length diagnostics see the raw matrix.
GncReport compute_gnc_report(const Eigen::MatrixXd& classifier,
                             const LabeledFeatureSet& features,
                             std::optional<double> reference = std::nullopt);

}  // namespace spherecode
