#include "spherecode/solver.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>

#include "spherecode/errors.hpp"
#include "spherecode/geometry.hpp"
#include "spherecode/manifold.hpp"
#include "spherecode/rng.hpp"

namespace spherecode {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-16;
constexpr double kMaxStep = 1e6;

void check_ce_inputs(const Eigen::MatrixXd& classifier,
                     const Eigen::MatrixXd& features,
                     const std::vector<int>& labels, const char* where) {
  if (classifier.rows() != features.rows()) {
    throw DimensionMismatch(std::string(where) + ": classifier dimension " +
                            std::to_string(classifier.rows()) +
                            " but feature dimension " +
                            std::to_string(features.rows()));
  }
  if (static_cast<Eigen::Index>(labels.size()) != features.cols()) {
    throw ShapeMismatch(std::string(where) + ": " +
                        std::to_string(labels.size()) + " labels for " +
                        std::to_string(features.cols()) + " feature columns");
  }
  if (classifier.cols() < 2) {
    throw InvalidShape(std::string(where) + ": need at least two classes");
  }
  const int k_count = static_cast<int>(classifier.cols());
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 0 || labels[j] >= k_count) {
      throw LabelOutOfRange(std::string(where) + ": label " +
                            std::to_string(labels[j]) + " at sample " +
                            std::to_string(j) + " outside [0, " +
                            std::to_string(k_count) + ")");
    }
  }
}

void check_tau(double tau, const char* where) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidConfig(std::string(where) + ": tau must be positive and finite");
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

double max_offdiag_cosine(const Eigen::MatrixXd& unit_columns) {
  const Eigen::MatrixXd gram = unit_columns.transpose() * unit_columns;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < gram.rows(); ++a) {
    for (Eigen::Index b = 0; b < gram.cols(); ++b) {
      if (a != b) {
        best = std::max(best, gram(a, b));
      }
    }
  }
  return best;
}

void validate_solver_config(const SolverConfig& config, const char* where) {
  if (config.dim < 1) {
    throw InvalidConfig(std::string(where) + ": dim must be at least 1");
  }
  if (config.count < 2) {
    throw InvalidConfig(std::string(where) + ": count must be at least 2");
  }
  if (config.samples_per_class < 1) {
    throw InvalidConfig(std::string(where) +
                        ": samples_per_class must be at least 1");
  }
  if (config.restarts < 1) {
    throw InvalidConfig(std::string(where) + ": restarts must be at least 1");
  }
  if (config.max_iters < 1) {
    throw InvalidConfig(std::string(where) + ": max_iters must be at least 1");
  }
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw InvalidConfig(std::string(where) +
                        ": step_size must be positive and finite");
  }
  if (!(config.grad_tol > 0.0)) {
    throw InvalidConfig(std::string(where) + ": grad_tol must be positive");
  }
  if (config.threads < 0) {
    throw InvalidConfig(std::string(where) + ": threads must be nonnegative");
  }
  if (config.tau_schedule.empty()) {
    throw InvalidConfig(std::string(where) + ": tau_schedule must be nonempty");
  }
  for (const double tau : config.tau_schedule) {
    check_tau(tau, where);
  }
}

int resolve_threads(int requested, int jobs) {
  int threads = requested;
  if (threads == 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (threads < 1) {
    threads = 1;
  }
  return std::min(threads, jobs);
}

// Runs fn(0), ..., fn(jobs - 1), possibly on a small thread pool. Results
// must be written to preallocated slots so the ordering stays deterministic
// regardless of scheduling.
template <typename Fn>
void parallel_for_index(int jobs, int threads, const Fn& fn) {
  threads = resolve_threads(threads, jobs);
  if (threads <= 1) {
    for (int i = 0; i < jobs; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& thread : pool) {
    thread.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

struct DescentControl {
  int max_iters = 5000;
  double step0 = 1.0;
  double grad_tol = 1e-7;
};

// Entry stage for restart r into the temperature ladder. Warm-starting every
// restart from the first (largest) temperature can funnel all of them into a
// single coarse-scale basin that stays locally optimal as the smoothing is
// removed, hiding better sharp-scale optima. Staggering the entry point keeps
// restart 0 on the classical full ladder while later restarts join at colder
// rungs, so the pool samples basins at every smoothing level.
std::size_t schedule_entry_stage(int restart, std::size_t stages) {
  if (stages == 0) {
    return 0;
  }
  return static_cast<std::size_t>(restart) % stages;
}

// Riemannian descent with backtracking Armijo line search on the product of
// unit spheres, jointly over (classifier, features) at fixed temperature.
// The step carries over between iterations (doubled as the first trial) so
// the search rarely backtracks more than once.
long descend_smoothed_ce(Eigen::MatrixXd& classifier, Eigen::MatrixXd& features,
                         const std::vector<int>& labels, double tau,
                         const DescentControl& control, double* final_objective) {
  Eigen::MatrixXd grad_w;
  Eigen::MatrixXd grad_h;
  double objective =
      smoothed_ce_gradients(classifier, features, labels, tau, &grad_w, &grad_h);
  if (!std::isfinite(objective)) {
    throw NonFiniteLoss("descend_smoothed_ce: objective not finite at start");
  }
  double step = control.step0;
  long iters = 0;
  for (; iters < control.max_iters; ++iters) {
    const Eigen::MatrixXd rgrad_w = tangent_project(classifier, grad_w);
    const Eigen::MatrixXd rgrad_h = tangent_project(features, grad_h);
    const double grad_sq = rgrad_w.squaredNorm() + rgrad_h.squaredNorm();
    if (std::sqrt(grad_sq) < control.grad_tol) {
      break;
    }
    double alpha = std::min(step * 2.0, kMaxStep);
    bool accepted = false;
    while (alpha >= kMinStep) {
      Eigen::MatrixXd trial_w = classifier - alpha * rgrad_w;
      Eigen::MatrixXd trial_h = features - alpha * rgrad_h;
      normalize_columns(trial_w);
      normalize_columns(trial_h);
      const double trial_objective =
          smoothed_ce_objective(trial_w, trial_h, labels, tau);
      if (std::isfinite(trial_objective) &&
          trial_objective <= objective - kArmijoSlope * alpha * grad_sq) {
        classifier = std::move(trial_w);
        features = std::move(trial_h);
        objective = trial_objective;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      break;  // Line search exhausted: no descent direction at this scale.
    }
    step = alpha;
    objective = smoothed_ce_gradients(classifier, features, labels, tau,
                                      &grad_w, &grad_h);
  }
  if (final_objective != nullptr) {
    *final_objective = objective;
  }
  return iters;
}

// Log-sum-exp smoothing of the maximum pairwise cosine, with gradient.
double pairwise_lse_gradients(const Eigen::MatrixXd& points, double tau,
                              Eigen::MatrixXd* grad) {
  const Eigen::Index count = points.cols();
  const Eigen::MatrixXd gram = points.transpose() * points;
  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < count; ++a) {
    for (Eigen::Index b = 0; b < count; ++b) {
      if (a != b) {
        shift = std::max(shift, gram(a, b));
      }
    }
  }
  double total = 0.0;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(count, count);
  for (Eigen::Index a = 0; a < count; ++a) {
    for (Eigen::Index b = 0; b < count; ++b) {
      if (a != b) {
        const double w = std::exp((gram(a, b) - shift) / tau);
        weights(a, b) = w;
        total += w;
      }
    }
  }
  if (grad != nullptr) {
    weights /= total;
    *grad = 2.0 * points * weights;
  }
  return shift + tau * std::log(total);
}

long descend_tammes(Eigen::MatrixXd& points, double tau,
                    const DescentControl& control, double* final_objective) {
  Eigen::MatrixXd grad;
  double objective = pairwise_lse_gradients(points, tau, &grad);
  if (!std::isfinite(objective)) {
    throw NonFiniteLoss("descend_tammes: objective not finite at start");
  }
  double step = control.step0;
  long iters = 0;
  for (; iters < control.max_iters; ++iters) {
    const Eigen::MatrixXd rgrad = tangent_project(points, grad);
    const double grad_sq = rgrad.squaredNorm();
    if (std::sqrt(grad_sq) < control.grad_tol) {
      break;
    }
    double alpha = std::min(step * 2.0, kMaxStep);
    bool accepted = false;
    while (alpha >= kMinStep) {
      Eigen::MatrixXd trial = points - alpha * rgrad;
      normalize_columns(trial);
      const double trial_objective = pairwise_lse_gradients(trial, tau, nullptr);
      if (std::isfinite(trial_objective) &&
          trial_objective <= objective - kArmijoSlope * alpha * grad_sq) {
        points = std::move(trial);
        objective = trial_objective;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      break;
    }
    step = alpha;
    objective = pairwise_lse_gradients(points, tau, &grad);
  }
  if (final_objective != nullptr) {
    *final_objective = objective;
  }
  return iters;
}

struct RestartOutcome {
  Eigen::MatrixXd classifier;
  Eigen::MatrixXd features;  // empty for pairwise solves
  double achieved = 0.0;
  long iterations = 0;
  std::vector<StagePoint> trace;
};

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kSmoothedCe:
      return "smoothed-ce";
    case ObjectiveKind::kHardmax:
      return "hardmax";
    case ObjectiveKind::kOneVsRest:
      return "one-vs-rest";
    case ObjectiveKind::kOneVsOne:
      return "one-vs-one";
  }
  return "unknown";
}

std::vector<double> default_tau_schedule() {
  std::vector<double> schedule;
  schedule.reserve(8);
  double tau = 1.0;
  for (int i = 0; i < 8; ++i) {
    schedule.push_back(tau);
    tau *= 0.5;
  }
  return schedule;
}

double smoothed_ce_gradients(const Eigen::MatrixXd& classifier,
                             const Eigen::MatrixXd& features,
                             const std::vector<int>& labels, double tau,
                             Eigen::MatrixXd* grad_classifier,
                             Eigen::MatrixXd* grad_features) {
  check_ce_inputs(classifier, features, labels, "smoothed_ce");
  check_tau(tau, "smoothed_ce");
  const Eigen::Index k_count = classifier.cols();
  const Eigen::Index n_samples = features.cols();
  const bool need_grad = grad_classifier != nullptr || grad_features != nullptr;

  const Eigen::MatrixXd logits = classifier.transpose() * features;
  Eigen::MatrixXd sigma;
  if (need_grad) {
    sigma = Eigen::MatrixXd::Zero(k_count, n_samples);
  }

  double loss = 0.0;
  for (Eigen::Index j = 0; j < n_samples; ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    const double base = logits(label, j);
    // Shift by the largest exponent, never below the implicit exp(0) term.
    double shift = 0.0;
    for (Eigen::Index k = 0; k < k_count; ++k) {
      if (k != label) {
        shift = std::max(shift, (logits(k, j) - base) / tau);
      }
    }
    double denom = std::exp(-shift);
    for (Eigen::Index k = 0; k < k_count; ++k) {
      if (k != label) {
        denom += std::exp((logits(k, j) - base) / tau - shift);
      }
    }
    loss += shift + std::log(denom);
    if (need_grad) {
      double prob_sum = 0.0;
      for (Eigen::Index k = 0; k < k_count; ++k) {
        if (k != label) {
          const double p = std::exp((logits(k, j) - base) / tau - shift) / denom;
          sigma(k, j) = p;
          prob_sum += p;
        }
      }
      sigma(label, j) = -prob_sum;
    }
  }
  loss /= static_cast<double>(n_samples);
  const double grad_scale = 1.0 / (static_cast<double>(n_samples) * tau);
  if (grad_classifier != nullptr) {
    *grad_classifier = grad_scale * (features * sigma.transpose());
  }
  if (grad_features != nullptr) {
    *grad_features = grad_scale * (classifier * sigma);
  }
  return loss;
}

double smoothed_ce_objective(const Eigen::MatrixXd& classifier,
                             const Eigen::MatrixXd& features,
                             const std::vector<int>& labels, double tau) {
  return smoothed_ce_gradients(classifier, features, labels, tau, nullptr,
                               nullptr);
}

double smoothed_ce_objective(const SphericalConfiguration& classifier,
                             const LabeledFeatureSet& features, double tau) {
  if (features.num_classes() != classifier.count()) {
    throw ShapeMismatch("smoothed_ce: feature set has " +
                        std::to_string(features.num_classes()) +
                        " classes but classifier has " +
                        std::to_string(classifier.count()));
  }
  return smoothed_ce_objective(classifier.matrix(), features.matrix(),
                               features.labels(), tau);
}

double hardmax_objective(const Eigen::MatrixXd& classifier,
                         const Eigen::MatrixXd& features,
                         const std::vector<int>& labels) {
  check_ce_inputs(classifier, features, labels, "hardmax");
  const Eigen::MatrixXd logits = classifier.transpose() * features;
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < classifier.cols(); ++k) {
      if (k != label) {
        worst = std::max(worst, logits(k, j) - logits(label, j));
      }
    }
  }
  return worst;
}

double hardmax_objective(const SphericalConfiguration& classifier,
                         const LabeledFeatureSet& features) {
  if (features.num_classes() != classifier.count()) {
    throw ShapeMismatch("hardmax: feature set has " +
                        std::to_string(features.num_classes()) +
                        " classes but classifier has " +
                        std::to_string(classifier.count()));
  }
  return hardmax_objective(classifier.matrix(), features.matrix(),
                           features.labels());
}

double smoothed_hardmax_objective(const Eigen::MatrixXd& classifier,
                                  const Eigen::MatrixXd& features,
                                  const std::vector<int>& labels, double tau) {
  check_tau(tau, "smoothed_hardmax");
  const double worst = hardmax_objective(classifier, features, labels);
  const Eigen::MatrixXd logits = classifier.transpose() * features;
  double total = 0.0;
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const int label = labels[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < classifier.cols(); ++k) {
      if (k != label) {
        total += std::exp((logits(k, j) - logits(label, j) - worst) / tau);
      }
    }
  }
  return worst + tau * std::log(total);
}

SolveReport solve_softmax_code(const SolverConfig& config) {
  validate_solver_config(config, "solve_softmax_code");
  const std::vector<int> labels =
      class_major_labels(config.count, config.samples_per_class);
  const DescentControl control{config.max_iters, config.step_size,
                               config.grad_tol};

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  parallel_for_index(config.restarts, config.threads, [&](int r) {
    SplitRng rng(config.seed, static_cast<std::uint64_t>(r));
    Eigen::MatrixXd classifier = rng.unit_columns(config.dim, config.count);
    Eigen::MatrixXd features = rng.unit_columns(
        config.dim,
        static_cast<Eigen::Index>(config.count) * config.samples_per_class);
    RestartOutcome outcome;
    const std::size_t entry =
        schedule_entry_stage(r, config.tau_schedule.size());
    for (std::size_t stage = entry; stage < config.tau_schedule.size();
         ++stage) {
      const double tau = config.tau_schedule[stage];
      double objective = 0.0;
      outcome.iterations +=
          descend_smoothed_ce(classifier, features, labels, tau, control,
                              &objective);
      outcome.trace.push_back(StagePoint{tau, objective});
    }
    outcome.achieved = rho_one_vs_rest(SphericalConfiguration(classifier));
    outcome.classifier = std::move(classifier);
    outcome.features = std::move(features);
    outcomes[static_cast<std::size_t>(r)] = std::move(outcome);
  });

  int best = 0;
  for (int r = 1; r < config.restarts; ++r) {
    if (outcomes[static_cast<std::size_t>(r)].achieved >
        outcomes[static_cast<std::size_t>(best)].achieved) {
      best = r;
    }
  }
  std::vector<RestartStat> stats;
  stats.reserve(outcomes.size());
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    stats.push_back(RestartStat{static_cast<std::uint64_t>(r),
                                outcomes[r].achieved, outcomes[r].iterations});
  }
  RestartOutcome& winner = outcomes[static_cast<std::size_t>(best)];
  return SolveReport{
      SphericalConfiguration(std::move(winner.classifier)),
      LabeledFeatureSet(config.count, labels, std::move(winner.features)),
      ObjectiveKind::kOneVsRest,
      winner.achieved,
      std::move(stats),
      std::move(winner.trace),
      config.seed};
}

SolveReport solve_tammes(const SolverConfig& config) {
  validate_solver_config(config, "solve_tammes");
  const DescentControl control{config.max_iters, config.step_size,
                               config.grad_tol};

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  parallel_for_index(config.restarts, config.threads, [&](int r) {
    SplitRng rng(config.seed, static_cast<std::uint64_t>(r));
    Eigen::MatrixXd points = rng.unit_columns(config.dim, config.count);
    RestartOutcome outcome;
    const std::size_t entry =
        schedule_entry_stage(r, config.tau_schedule.size());
    for (std::size_t stage = entry; stage < config.tau_schedule.size();
         ++stage) {
      const double tau = config.tau_schedule[stage];
      double objective = 0.0;
      outcome.iterations +=
          descend_tammes(points, tau, control, &objective);
      outcome.trace.push_back(StagePoint{tau, objective});
    }
    outcome.achieved = rho_one_vs_one(SphericalConfiguration(points));
    outcome.classifier = std::move(points);
    outcomes[static_cast<std::size_t>(r)] = std::move(outcome);
  });

  int best = 0;
  for (int r = 1; r < config.restarts; ++r) {
    if (outcomes[static_cast<std::size_t>(r)].achieved >
        outcomes[static_cast<std::size_t>(best)].achieved) {
      best = r;
    }
  }
  std::vector<RestartStat> stats;
  stats.reserve(outcomes.size());
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    stats.push_back(RestartStat{static_cast<std::uint64_t>(r),
                                outcomes[r].achieved, outcomes[r].iterations});
  }
  RestartOutcome& winner = outcomes[static_cast<std::size_t>(best)];
  return SolveReport{SphericalConfiguration(std::move(winner.classifier)),
                     std::nullopt,
                     ObjectiveKind::kOneVsOne,
                     winner.achieved,
                     std::move(stats),
                     std::move(winner.trace),
                     config.seed};
}

std::vector<HardmaxSweepRow> verify_hardmax_convergence(
    int dim, int count, const std::vector<double>& taus, int restarts,
    std::uint64_t seed, int threads) {
  if (taus.empty()) {
    throw InvalidConfig("verify_hardmax_convergence: taus must be nonempty");
  }
  for (const double tau : taus) {
    check_tau(tau, "verify_hardmax_convergence");
  }
  SolverConfig reference_config;
  reference_config.dim = dim;
  reference_config.count = count;
  reference_config.restarts = restarts;
  reference_config.seed = seed;
  reference_config.threads = threads;
  const SolveReport reference = solve_softmax_code(reference_config);
  const double reference_stat =
      max_offdiag_cosine(reference.best_config.matrix());

  const std::vector<int> labels = class_major_labels(count, 1);
  const DescentControl control;

  std::vector<HardmaxSweepRow> rows;
  rows.reserve(taus.size());
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    const double tau = taus[ti];
    struct FixedTauOutcome {
      double objective = std::numeric_limits<double>::infinity();
      double stat = 0.0;
    };
    std::vector<FixedTauOutcome> outcomes(static_cast<std::size_t>(restarts));
    parallel_for_index(restarts, threads, [&](int r) {
      // Streams are offset by the stage index so no restart here shares a
      // stream with the reference solve above.
      const std::uint64_t stream =
          (static_cast<std::uint64_t>(ti + 1) << 32) |
          static_cast<std::uint64_t>(r);
      SplitRng rng(seed, stream);
      Eigen::MatrixXd classifier = rng.unit_columns(dim, count);
      Eigen::MatrixXd features = rng.unit_columns(dim, count);
      double objective = 0.0;
      descend_smoothed_ce(classifier, features, labels, tau, control,
                          &objective);
      outcomes[static_cast<std::size_t>(r)] =
          FixedTauOutcome{objective, max_offdiag_cosine(classifier)};
    });
    FixedTauOutcome best = outcomes[0];
    for (std::size_t r = 1; r < outcomes.size(); ++r) {
      if (outcomes[r].objective < best.objective) {
        best = outcomes[r];
      }
    }
    rows.push_back(HardmaxSweepRow{tau, best.stat, reference_stat});
  }
  return rows;
}

LabeledFeatureSet solve_optimal_features(
    const SphericalConfiguration& classifier, int samples_per_class) {
  if (samples_per_class < 1) {
    throw InvalidConfig(
        "solve_optimal_features: samples_per_class must be at least 1");
  }
  const Eigen::Index k_count = classifier.count();
  Eigen::MatrixXd features(classifier.dim(), k_count * samples_per_class);
  std::vector<int> labels(static_cast<std::size_t>(k_count) * samples_per_class);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const UnitVector direction = optimal_feature_direction(classifier, k);
    for (int i = 0; i < samples_per_class; ++i) {
      const Eigen::Index j = k * samples_per_class + i;
      features.col(j) = direction.coords();
      labels[static_cast<std::size_t>(j)] = static_cast<int>(k);
    }
  }
  return LabeledFeatureSet(static_cast<int>(k_count), std::move(labels),
                           std::move(features));
}

}  // namespace spherecode
