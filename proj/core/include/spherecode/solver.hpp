#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "spherecode/configuration.hpp"
#include "spherecode/labeled_features.hpp"

namespace spherecode {

/// Which quantity a report's `achieved` field measures.
enum class ObjectiveKind { kSmoothedCe, kHardmax, kOneVsRest, kOneVsOne };

std::string_view to_string(ObjectiveKind kind);

/// Temperature ladder 1, 1/2, ..., 2^-7 used by the continuation scheme.
std::vector<double> default_tau_schedule();

struct SolverConfig {
  int dim = 2;
  int count = 2;
  int samples_per_class = 1;
  std::vector<double> tau_schedule = default_tau_schedule();
  int restarts = 1;
  int max_iters = 5000;    // per temperature stage
  double step_size = 1.0;  // initial line-search step
  double grad_tol = 1e-7;  // Riemannian gradient norm stop
  std::uint64_t seed = 0;
  int threads = 1;  // 0 selects hardware concurrency
};

struct RestartStat {
  std::uint64_t seed = 0;  // stream index fed to the restart's generator
  double achieved = 0.0;
  long iterations = 0;
};

struct StagePoint {
  double tau = 0.0;
  double objective = 0.0;
};

struct SolveReport {
  SphericalConfiguration best_config;
  std::optional<LabeledFeatureSet> best_features;
  ObjectiveKind objective_kind;
  double achieved = 0.0;
  std::vector<RestartStat> per_restart;
  std::vector<StagePoint> trace;  // stage-end objectives of the best restart
  std::uint64_t seed = 0;
};

/// Mean cross-entropy written in margin form: the per-sample loss is
/// log(1 + sum_{k' != label} exp(<w_{k'} - w_label, h> / tau)). Evaluated
/// with a max shift so extreme temperatures stay finite.
double smoothed_ce_objective(const Eigen::MatrixXd& classifier,
                             const Eigen::MatrixXd& features,
                             const std::vector<int>& labels, double tau);

double smoothed_ce_objective(const SphericalConfiguration& classifier,
                             const LabeledFeatureSet& features, double tau);

/// Objective plus Euclidean gradients with respect to both blocks. Either
/// gradient pointer may be null to skip that block.
double smoothed_ce_gradients(const Eigen::MatrixXd& classifier,
                             const Eigen::MatrixXd& features,
                             const std::vector<int>& labels, double tau,
                             Eigen::MatrixXd* grad_classifier,
                             Eigen::MatrixXd* grad_features);

/// Worst margin over all samples and wrong classes:
/// max_{k, i, k' != k} <w_{k'} - w_k, h_{k,i}>. Lies in [-2, 2] when both
/// blocks have unit columns.
double hardmax_objective(const Eigen::MatrixXd& classifier,
                         const Eigen::MatrixXd& features,
                         const std::vector<int>& labels);

double hardmax_objective(const SphericalConfiguration& classifier,
                         const LabeledFeatureSet& features);

/// Temperature-scaled log-sum-exp over the same margins. Sandwiches the
/// hardmax objective within tau * log(total number of margin terms).
double smoothed_hardmax_objective(const Eigen::MatrixXd& classifier,
                                  const Eigen::MatrixXd& features,
                                  const std::vector<int>& labels, double tau);

/// Maximizes the one-vs-rest margin by smoothed-CE continuation over the
/// temperature schedule with multistart. Both the classifier and feature
/// blocks live on the product of unit spheres. The report's `achieved` is
/// the exact margin of the best restart, with kind kOneVsRest.
SolveReport solve_softmax_code(const SolverConfig& config);

/// Maximizes the minimum pairwise distance via log-sum-exp continuation on
/// the maximum pairwise cosine. `achieved` is the exact minimum distance,
/// with kind kOneVsOne.
SolveReport solve_tammes(const SolverConfig& config);

struct HardmaxSweepRow {
  double tau = 0.0;
  double ce_max_cosine = 0.0;
  double hardmax_reference = 0.0;
};

/// Solves the smoothed problem at each fixed temperature (no continuation)
/// and compares the resulting maximum pairwise cosine against a reference
/// obtained with the full continuation schedule. The rows quantify how the
/// smoothed optimizer approaches the hardmax one as tau shrinks.
std::vector<HardmaxSweepRow> verify_hardmax_convergence(
    int dim, int count, const std::vector<double>& taus, int restarts,
    std::uint64_t seed, int threads = 1);

/// Closed-form optimal features for a fixed classifier: every sample of
/// class k sits at the unit residual direction of point k against the hull
/// of the others. Throws DegenerateResidual when a class has no residual.
LabeledFeatureSet solve_optimal_features(const SphericalConfiguration& classifier,
                                         int samples_per_class = 1);

}  // namespace spherecode
