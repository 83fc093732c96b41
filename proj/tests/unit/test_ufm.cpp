#include <doctest.h>

#include <spherecode/errors.hpp>
#include <spherecode/ufm.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

TEST_SUITE("ufm") {

TEST_CASE("sphere training keeps every column on the sphere") {
  spherecode::UfmConfig config;
  config.dim = 3;
  config.classes = 5;
  config.samples_per_class = 2;
  config.tau = 0.5;
  config.iters = 300;
  config.seed = 7;
  const auto result = spherecode::train_ufm(config);
  for (Eigen::Index c = 0; c < result.classifier.cols(); ++c) {
    CHECK(std::abs(result.classifier.col(c).norm() - 1.0) < 1e-12);
  }
  for (Eigen::Index c = 0; c < result.features.cols(); ++c) {
    CHECK(std::abs(result.features.col(c).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("loss trace never increases beyond line-search tolerance") {
  spherecode::UfmConfig config;
  config.dim = 2;
  config.classes = 6;
  config.samples_per_class = 3;
  config.tau = 0.2;
  config.iters = 500;
  config.log_every = 5;
  config.seed = 3;
  const auto result = spherecode::train_ufm(config);
  REQUIRE(result.trace.size() > 2);
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    CHECK(result.trace[i].loss <= result.trace[i - 1].loss + 1e-12);
    CHECK(result.trace[i].iter > result.trace[i - 1].iter);
  }
  CHECK(result.final_loss ==
        doctest::Approx(result.trace.back().loss).epsilon(1e-12));
}

TEST_CASE("sphere regime at the simplex scale recovers the simplex Gram") {
  spherecode::UfmConfig config;
  config.dim = 3;
  config.classes = 4;
  config.samples_per_class = 2;
  config.tau = 0.1;
  config.iters = 3000;
  config.seed = 0;
  const auto result = spherecode::train_ufm(config);
  const Eigen::MatrixXd gram =
      result.classifier.transpose() * result.classifier;
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (i != j) {
        CHECK(std::abs(gram(i, j) + 1.0 / 3.0) < 5e-3);
      }
    }
  }
}

TEST_CASE("weight decay spreads lengths that the sphere regime pins") {
  spherecode::UfmConfig sphere;
  sphere.dim = 2;
  sphere.classes = 8;
  sphere.samples_per_class = 3;
  sphere.tau = 0.1;
  sphere.iters = 2000;
  sphere.seed = 5;
  const auto sphere_run = spherecode::train_ufm(sphere);

  spherecode::UfmConfig decay = sphere;
  decay.regime = spherecode::UfmRegime::kWeightDecay;
  decay.tau = 1.0;
  decay.lambda = 5e-3;
  const auto decay_run = spherecode::train_ufm(decay);

  CHECK(std::isfinite(decay_run.final_loss));
  REQUIRE(decay_run.trace.size() > 1);
  CHECK(decay_run.trace.back().loss < decay_run.trace.front().loss);
  // Unconstrained norms drift off unit length; the ratio dispersion must
  // exceed the sphere run's, where every norm is pinned to one.
  CHECK(decay_run.report.norm_ratio_cv > sphere_run.report.norm_ratio_cv);
}

TEST_CASE("class-mean classifier rule tracks the means") {
  spherecode::UfmConfig config;
  config.dim = 4;
  config.classes = 6;
  config.samples_per_class = 4;
  config.tau = 0.1;
  config.classifier_rule = spherecode::ClassifierRule::kClassMeanFeature;
  config.cmf_beta = 0.9;
  config.iters = 1500;
  config.seed = 1;
  const auto result = spherecode::train_ufm(config);
  // After convergence the classifier sits on the normalized class means.
  const spherecode::LabeledFeatureSet features(
      config.classes, result.labels, result.features);
  Eigen::MatrixXd means = features.class_means();
  for (Eigen::Index c = 0; c < means.cols(); ++c) {
    means.col(c).normalize();
    CHECK((means.col(c) - result.classifier.col(c)).norm() < 1e-2);
  }
  CHECK(result.report.ncc_accuracy == doctest::Approx(1.0));
}

TEST_CASE("ema update at beta zero is the renormalized batch means") {
  Eigen::MatrixXd classifier(2, 3);
  classifier.col(0) << 1, 0;
  classifier.col(1) << 0, 1;
  classifier.col(2) << -1, 0;
  Eigen::MatrixXd means(2, 3);
  means.col(0) << 0.5, 0.5;
  means.col(1) << 0.0, 2.0;
  means.col(2) << -3.0, 0.0;
  const Eigen::MatrixXd updated =
      spherecode::cmf_update(classifier, means, 0.0, true);
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK((updated.col(c) - means.col(c).normalized()).norm() < 1e-15);
  }
  const Eigen::MatrixXd raw =
      spherecode::cmf_update(classifier, means, 0.0, false);
  CHECK((raw - means).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("ema update converges geometrically to a constant target") {
  Eigen::MatrixXd state(2, 2);
  state.col(0) << 1, 0;
  state.col(1) << 0, 1;
  Eigen::MatrixXd target(2, 2);
  target.col(0) << 0.2, -0.4;
  target.col(1) << -0.7, 0.1;
  const double beta = 0.9;
  Eigen::MatrixXd current = state;
  const int steps = 40;
  for (int t = 0; t < steps; ++t) {
    current = spherecode::cmf_update(current, target, beta, false);
  }
  const double expected_scale = std::pow(beta, steps);
  CHECK(((current - target) - expected_scale * (state - target))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("ema update near beta one barely moves") {
  Eigen::MatrixXd state(2, 2);
  state.col(0) << 1, 0;
  state.col(1) << 0, 1;
  Eigen::MatrixXd target(2, 2);
  target.col(0) << -1, 0;
  target.col(1) << 0, -1;
  const double beta = 1.0 - 1e-6;
  Eigen::MatrixXd current = state;
  const int steps = 100;
  for (int t = 0; t < steps; ++t) {
    current = spherecode::cmf_update(current, target, beta, false);
  }
  // Drift is bounded by steps * (1 - beta) * max distance to the target.
  const double bound = steps * 1e-6 * 2.0;
  CHECK((current - state).cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("ema update keeps columns for empty classes") {
  Eigen::MatrixXd classifier(2, 3);
  classifier.col(0) << 1, 0;
  classifier.col(1) << 0, 1;
  classifier.col(2) << -1, 0;
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(2, 3);
  means.col(0) << 0, 1;
  means.col(2) << 1, 0;
  const std::vector<long> counts{4, 0, 2};
  const Eigen::MatrixXd updated =
      spherecode::cmf_update(classifier, means, 0.5, false, &counts);
  CHECK((updated.col(1) - classifier.col(1)).norm() == 0.0);
  CHECK((updated.col(0) - (0.5 * classifier.col(0) + 0.5 * means.col(0)))
            .norm() < 1e-15);
}

TEST_CASE("ema update validates shapes and beta") {
  Eigen::MatrixXd classifier(2, 3);
  classifier.setZero();
  Eigen::MatrixXd wrong(2, 2);
  wrong.setZero();
  CHECK_THROWS_AS(spherecode::cmf_update(classifier, wrong, 0.5),
                  spherecode::ShapeMismatch);
  Eigen::MatrixXd means(2, 3);
  means.setZero();
  CHECK_THROWS_AS(spherecode::cmf_update(classifier, means, 1.0),
                  spherecode::InvalidConfig);
  CHECK_THROWS_AS(spherecode::cmf_update(classifier, means, -0.1),
                  spherecode::InvalidConfig);
}

TEST_CASE("trace rows appear at the logging cadence with gnc values") {
  spherecode::UfmConfig config;
  config.dim = 2;
  config.classes = 4;
  config.samples_per_class = 2;
  config.tau = 0.3;
  config.iters = 57;
  config.log_every = 10;
  config.seed = 9;
  const auto result = spherecode::train_ufm(config);
  REQUIRE(!result.trace.empty());
  CHECK(result.trace.front().iter == 0);
  for (std::size_t i = 0; i + 1 < result.trace.size(); ++i) {
    CHECK(result.trace[i].iter % 10 == 0);
  }
  for (const auto& row : result.trace) {
    CHECK(std::isfinite(row.gnc1));
    CHECK(std::isfinite(row.gnc3));
    CHECK(row.gnc1 >= 0.0);
  }
}

TEST_CASE("invalid configurations are rejected up front") {
  spherecode::UfmConfig config;
  config.classes = 1;
  CHECK_THROWS_AS(spherecode::train_ufm(config), spherecode::InvalidConfig);
  config = spherecode::UfmConfig{};
  config.tau = 0.0;
  CHECK_THROWS_AS(spherecode::train_ufm(config), spherecode::InvalidConfig);
  config = spherecode::UfmConfig{};
  config.regime = spherecode::UfmRegime::kWeightDecay;
  config.lambda = -1.0;
  CHECK_THROWS_AS(spherecode::train_ufm(config), spherecode::InvalidConfig);
}

}  // TEST_SUITE
