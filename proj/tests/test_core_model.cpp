#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gai/bandit_instance.hpp"
#include "gai/linear_state.hpp"
#include "gai/random.hpp"

using namespace gai;

TEST(SyntheticInstance, MeansStayInBand) {
  const BanditInstance inst = make_synthetic_instance(50, 0.49975, 0.5005, 0.5, 7);
  ASSERT_EQ(inst.arms(), 50u);
  for (double m : inst.means()) {
    EXPECT_GE(m, 0.49975);
    EXPECT_LE(m, 0.5005);
  }
  EXPECT_EQ(inst.law(), RewardLaw::Bernoulli);
  EXPECT_TRUE(inst.one_hot());
  EXPECT_EQ(inst.dim(), 50u);
}

TEST(SyntheticInstance, DegenerateBandSingleArm) {
  const BanditInstance inst = make_synthetic_instance(1, 0.3, 0.3, 0.5, 0);
  ASSERT_EQ(inst.arms(), 1u);
  EXPECT_DOUBLE_EQ(inst.mean(0), 0.3);
  EXPECT_TRUE(inst.good_set().empty());
}

TEST(SyntheticInstance, DeterministicForSeed) {
  const auto a = make_synthetic_instance(3, 0.0, 1.0, 0.5, 99);
  const auto b = make_synthetic_instance(3, 0.0, 1.0, 0.5, 99);
  const auto c = make_synthetic_instance(3, 0.0, 1.0, 0.5, 100);
  EXPECT_TRUE(std::equal(a.means().begin(), a.means().end(), b.means().begin()));
  EXPECT_FALSE(std::equal(a.means().begin(), a.means().end(), c.means().begin()));
}

TEST(SyntheticInstance, RejectsBadBands) {
  EXPECT_THROW(make_synthetic_instance(0, 0.1, 0.2, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(make_synthetic_instance(3, 0.6, 0.2, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(make_synthetic_instance(3, -0.1, 0.2, 0.5, 1), std::invalid_argument);
  EXPECT_THROW(make_synthetic_instance(3, 0.1, 1.2, 0.5, 1), std::invalid_argument);
}

TEST(BanditInstance, GoodSetIsThresholdRule) {
  BanditInstance inst({0.2, 0.5, 0.7, 0.49}, 0.5);
  EXPECT_EQ(inst.good_set(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(inst.good_count(), 2u);
  EXPECT_EQ(inst.best_arm(), 2u);
  EXPECT_THROW(BanditInstance({1.2}, 0.5), std::invalid_argument);
  EXPECT_THROW(BanditInstance(std::vector<double>{}, 0.5), std::invalid_argument);
  EXPECT_THROW(BanditInstance({0.5}, 0.5, RewardLaw::Gaussian, -1.0), std::invalid_argument);
}

TEST(BanditInstance, BestArmTiesGoToLowestIndex) {
  BanditInstance inst({0.4, 0.8, 0.8}, 0.5);
  EXPECT_EQ(inst.best_arm(), 1u);
}

TEST(SampleReward, DegenerateBernoulli) {
  BanditInstance inst({1.0, 0.0}, 0.5);
  Rng rng = make_rng(3);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(sample_reward(inst, 0, rng).value, 1.0);
    EXPECT_EQ(sample_reward(inst, 1, rng).value, 0.0);
  }
}

TEST(SampleReward, FairCoinAverage) {
  BanditInstance inst({0.5}, 0.5);
  Rng rng = make_rng(11);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double v = sample_reward(inst, 0, rng).value;
    ASSERT_TRUE(v == 0.0 || v == 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / 10000.0, 0.5, 0.02);
}

TEST(SampleReward, GaussianZeroSigmaIsMean) {
  BanditInstance inst({0.9, 0.1}, 0.5, RewardLaw::Gaussian, 0.0);
  Rng rng = make_rng(1);
  EXPECT_EQ(sample_reward(inst, 0, rng).value, 0.9);
  EXPECT_EQ(sample_reward(inst, 1, rng, 7).round, 7);
}

TEST(SampleReward, OutOfRangeArm) {
  BanditInstance inst({0.5}, 0.5);
  Rng rng = make_rng(1);
  EXPECT_THROW(sample_reward(inst, 1, rng), std::out_of_range);
}

TEST(SampleReward, SameSeedSameStream) {
  BanditInstance inst({0.3, 0.6}, 0.5);
  Rng a = make_rng(5, 2);
  Rng b = make_rng(5, 2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_reward(inst, i % 2, a).value, sample_reward(inst, i % 2, b).value);
  }
}

TEST(LinearState, OneHotUpdates) {
  LinearState s = LinearState::one_hot(3);
  s.update(0, 1.0);
  EXPECT_EQ(s.gram()(0, 0), 2.0);
  EXPECT_EQ(s.response()(0), 1.0);
  s.update(0, 0.0);
  EXPECT_EQ(s.gram()(0, 0), 3.0);
  EXPECT_EQ(s.response()(0), 1.0);

  const Eigen::MatrixXd before = s.gram();
  s.update(1, 1.0);
  const Eigen::MatrixXd after = s.gram();
  EXPECT_EQ(after.row(0), before.row(0));
  EXPECT_EQ(after.col(0), before.col(0));
  EXPECT_EQ(s.round(), 3);
}

TEST(LinearState, RidgeMeanExamples) {
  LinearState s = LinearState::one_hot(3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.ridge_mean(i), 0.0);
  s.update(0, 1.0);
  s.update(0, 0.0);
  EXPECT_DOUBLE_EQ(s.ridge_mean(0), 1.0 / 3.0);
  for (int i = 0; i < 3; ++i) s.update(1, 1.0);
  EXPECT_DOUBLE_EQ(s.ridge_mean(1), 3.0 / 4.0);
}

TEST(LinearState, FeatureNormExamples) {
  LinearState s = LinearState::one_hot(2);
  EXPECT_EQ(s.feature_norm(0), 1.0);
  for (int i = 0; i < 3; ++i) s.update(0, 0.0);
  EXPECT_DOUBLE_EQ(s.feature_norm(0), 0.5);
  EXPECT_EQ(s.feature_norm(1), 1.0);
}

TEST(LinearState, EmpiricalMean) {
  LinearState s = LinearState::one_hot(3);
  EXPECT_THROW(s.empirical_mean(0), UndefinedStatistic);
  s.update(0, 1.0);
  s.update(0, 0.0);
  EXPECT_DOUBLE_EQ(s.empirical_mean(0), 0.5);
  s.update(1, 1.0);
  EXPECT_DOUBLE_EQ(s.empirical_mean(1), 1.0);
  for (double r : {1.0, 1.0, 0.0, 0.0, 1.0}) s.update(2, r);
  EXPECT_DOUBLE_EQ(s.empirical_mean(2), 0.6);
}

TEST(LinearState, DiagonalRejectsForeignVector) {
  LinearState s = LinearState::one_hot(2);
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  EXPECT_THROW(s.update(x, 0, 1.0), std::invalid_argument);
}

// Dense layout against an explicit inverse built in the test.
TEST(LinearState, DenseMatchesExplicitInverse) {
  Rng rng = make_rng(21);
  const int d = 4;
  const int k = 6;
  Eigen::MatrixXd features(d, k);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < k; ++j) features(i, j) = normal(rng, 0.0, 1.0);
  }
  LinearState s = LinearState::dense(features);
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  for (int step = 0; step < 40; ++step) {
    const int arm = static_cast<int>(uniform01(rng) * k) % k;
    const double y = uniform01(rng);
    s.update(static_cast<std::size_t>(arm), y);
    V += features.col(arm) * features.col(arm).transpose();
    b += features.col(arm) * y;
    const Eigen::MatrixXd Vinv = V.fullPivLu().inverse();
    for (int i = 0; i < k; ++i) {
      const Eigen::VectorXd x = features.col(i);
      EXPECT_NEAR(s.ridge_mean(static_cast<std::size_t>(i)), x.dot(Vinv * b), 1e-10);
      EXPECT_NEAR(s.feature_norm(static_cast<std::size_t>(i)), std::sqrt(x.dot(Vinv * x)), 1e-10);
    }
  }
  EXPECT_EQ(s.round(), 40);
}

TEST(LinearStateProperty, NormNonIncreasingAndGramSpd) {
  Rng rng = make_rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + trial % 5;
    LinearState s = LinearState::one_hot(k);
    LinearState dense = LinearState::dense(Eigen::MatrixXd::Identity(k, k));
    std::int64_t total = 0;
    for (int step = 0; step < 60; ++step) {
      const std::size_t arm = static_cast<std::size_t>(uniform01(rng) * k) % k;
      const double before = dense.feature_norm(arm);
      s.update(arm, bernoulli(rng, 0.5) ? 1.0 : 0.0);
      dense.update(arm, s.reward_sum(arm) - dense.reward_sum(arm));
      ++total;
      EXPECT_LE(dense.feature_norm(arm), before);
      EXPECT_EQ(s.round(), total);
    }
    std::int64_t pulls = 0;
    for (std::size_t i = 0; i < k; ++i) pulls += s.pull_count(i);
    EXPECT_EQ(pulls, s.round());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense.gram());
    EXPECT_GE(eig.eigenvalues().minCoeff(), 1.0 - 1e-12);
  }
}
