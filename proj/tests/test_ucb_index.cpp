#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gai/random.hpp"
#include "gai/ucb_index.hpp"

using namespace gai;

TEST(ComputeIndex, SymmetricArms) {
  const double u = 0.3;
  const double beta = 1.7;
  const IndexSnapshot s = compute_index(std::vector{0.4, 0.4}, std::vector{u, u}, beta);
  EXPECT_DOUBLE_EQ(s.index[0], 2 * beta * u);
  EXPECT_DOUBLE_EQ(s.index[1], 2 * beta * u);
  EXPECT_EQ(s.best_lcb_arm, 0u);
}

TEST(ComputeIndex, ZeroBetaIsNegativeGap) {
  const IndexSnapshot s = compute_index(std::vector{0.7, 0.5}, std::vector{0.25, 0.25}, 0.0);
  EXPECT_EQ(s.best_lcb_arm, 0u);
  EXPECT_DOUBLE_EQ(s.index[0], 0.0);
  EXPECT_NEAR(s.index[1], -0.2, 1e-15);
}

TEST(ComputeIndex, WorkedExample) {
  const IndexSnapshot s = compute_index(std::vector{0.7, 0.5}, std::vector{0.1, 0.2}, 1.0);
  EXPECT_EQ(s.best_lcb_arm, 0u);
  EXPECT_NEAR(s.phi[0], 0.2, 1e-15);
  EXPECT_NEAR(s.phi[1], 0.3, 1e-15);
  EXPECT_NEAR(s.gap_estimates[0], 0.0, 1e-15);
  EXPECT_NEAR(s.gap_estimates[1], 0.2, 1e-15);
  EXPECT_NEAR(s.index[0], 0.2, 1e-15);
  EXPECT_NEAR(s.index[1], 0.1, 1e-15);
}

TEST(ComputeIndex, RejectsEmptyAndMismatch) {
  EXPECT_THROW(compute_index(std::vector<double>{}, std::vector<double>{}, 1.0),
               std::invalid_argument);
  EXPECT_THROW(compute_index(std::vector{0.1}, std::vector{0.1, 0.2}, 1.0),
               std::invalid_argument);
}

TEST(Coldness, HalfDeltaSingleSuboptimalIsZero) {
  IndexSnapshot s = compute_index(std::vector{0.9, 0.1}, std::vector{0.01, 0.01}, 1.0);
  ASSERT_LT(s.index[1], 0.0);
  EXPECT_EQ(coldness(s, 0.5), 0.0);
  EXPECT_EQ(s.suboptimal_set_size, 1u);
}

TEST(Coldness, DirectEvaluation) {
  // S = (2, -1): |L| = 1, S_max = 2.
  IndexSnapshot s;
  s.index = {2.0, -1.0};
  EXPECT_NEAR(coldness(s, 0.9), std::log(9.0) / 2.0, 1e-12);
  EXPECT_NEAR(coldness(s, 0.9), 1.0986122886681098, 1e-12);
}

TEST(Coldness, EmptySuboptimalSetClampsToOne) {
  IndexSnapshot all_nonneg;
  all_nonneg.index = {2.0, 0.5};
  IndexSnapshot one_bad;
  one_bad.index = {2.0, -0.5};
  EXPECT_EQ(coldness(all_nonneg, 0.9), coldness(one_bad, 0.9));
  EXPECT_EQ(all_nonneg.suboptimal_set_size, 0u);
}

TEST(Coldness, NegativeFormulaClampsToZero) {
  IndexSnapshot s;
  s.index = {1.0, -1.0};
  EXPECT_EQ(coldness(s, 0.1), 0.0);
}

TEST(Coldness, FloorsDenominator) {
  IndexSnapshot s;
  s.index = {0.0, -1.0, -1.0};
  const double g = coldness(s, 0.9);
  EXPECT_TRUE(s.coldness_floored);
  EXPECT_NEAR(g, std::log(0.9 * 2 / 0.1) / kColdnessDenominatorFloor, 1e3);
  EXPECT_THROW(coldness(s, 0.0), std::invalid_argument);
  EXPECT_THROW(coldness(s, 1.0), std::invalid_argument);
}

TEST(Softmax, ZeroColdnessIsUniform) {
  const auto p = softmax_policy(std::vector{3.0, -1.0, 0.5, 7.0}, 0.0);
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Softmax, TwoArmExample) {
  const auto p = softmax_policy(std::vector{std::log(2.0), 0.0}, 1.0);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(Softmax, ExtremeValuesDoNotOverflow) {
  const auto p = softmax_policy(std::vector{1e6, -1e6, -1e6}, 1.0);
  EXPECT_GE(p[0], 1.0 - 1e-9);
  for (double v : p) EXPECT_TRUE(std::isfinite(v));
}

TEST(SampleArm, PointMasses) {
  Rng rng = make_rng(4);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_arm(std::vector{1.0, 0.0, 0.0}, rng), 0u);
    EXPECT_EQ(sample_arm(std::vector{0.0, 1.0, 0.0}, rng), 1u);
  }
}

TEST(SampleArm, FairSplit) {
  Rng rng = make_rng(5);
  int zeros = 0;
  for (int i = 0; i < 10000; ++i) zeros += sample_arm(std::vector{0.5, 0.5}, rng) == 0 ? 1 : 0;
  EXPECT_NEAR(zeros / 10000.0, 0.5, 0.02);
}

TEST(SampleArm, DeterministicGivenState) {
  Rng a = make_rng(9);
  Rng b = make_rng(9);
  const std::vector<double> p{0.2, 0.3, 0.5};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_arm(p, a), sample_arm(p, b));
}

// Properties over random inputs.

class IndexProperty : public ::testing::Test {
 protected:
  Rng rng = make_rng(2024);
  std::vector<double> random_vec(std::size_t k, double lo, double hi) {
    std::vector<double> v(k);
    for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
    return v;
  }
};

TEST_F(IndexProperty, BestArmIndexNonNegativeAndZeroGap) {
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + trial % 12;
    const auto means = random_vec(k, 0.0, 1.0);
    const auto radii = random_vec(k, 0.0, 0.5);
    const double beta = 3.0 * uniform01(rng);
    const IndexSnapshot s = compute_index(means, radii, beta);
    const std::size_t star = s.best_lcb_arm;
    EXPECT_GE(s.index[star], 0.0);
    EXPECT_EQ(s.gap_estimates[star], 0.0);
    EXPECT_DOUBLE_EQ(s.index[star], beta * 2.0 * radii[star]);
  }
}

TEST_F(IndexProperty, PolicyIsDistribution) {
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t k = 1 + trial % 30;
    IndexSnapshot s = compute_index(random_vec(k, 0, 1), random_vec(k, 0, 0.3),
                                    2.0 * uniform01(rng));
    const double g = coldness(s, 0.05 + 0.9 * uniform01(rng));
    const auto p = softmax_policy(s.index, g);
    double total = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST_F(IndexProperty, SoftmaxShiftInvariant) {
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 10;
    const auto s = random_vec(k, -2, 2);
    const double c = -5.0 + 10.0 * uniform01(rng);
    std::vector<double> shifted = s;
    for (double& v : shifted) v += c;
    const double g = 3.0 * uniform01(rng);
    const auto p = softmax_policy(s, g);
    const auto q = softmax_policy(shifted, g);
    for (std::size_t i = 0; i < k; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
    EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(),
              std::max_element(q.begin(), q.end()) - q.begin());
  }
}

TEST_F(IndexProperty, DoublingBetaDoublesPhiTerm) {
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 8;
    const auto means = random_vec(k, 0, 1);
    const auto radii = random_vec(k, 0, 0.4);
    const double beta = 2.0 * uniform01(rng);
    const IndexSnapshot a = compute_index(means, radii, beta);
    const IndexSnapshot b = compute_index(means, radii, 2.0 * beta);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_NEAR(b.index[i] + b.gap_estimates[i], 2.0 * (a.index[i] + a.gap_estimates[i]),
                  1e-12);
    }
  }
}

// Valid intervals |mean - mu| <= beta r: a negative index certifies that the
// arm is worse than i*.
TEST_F(IndexProperty, NegativeIndexImpliesSuboptimal) {
  int certified = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t k = 2 + trial % 4;
    const auto mu = random_vec(k, 0, 1);
    const auto radii = random_vec(k, 0.0, 0.2);
    const double beta = 0.2 + 2.0 * uniform01(rng);
    std::vector<double> est(k);
    for (std::size_t i = 0; i < k; ++i) {
      est[i] = mu[i] + beta * radii[i] * (2.0 * uniform01(rng) - 1.0);
    }
    const IndexSnapshot s = compute_index(est, radii, beta);
    for (std::size_t i = 0; i < k; ++i) {
      if (s.index[i] < 0.0) {
        ++certified;
        EXPECT_LT(mu[i], mu[s.best_lcb_arm]);
      }
    }
  }
  EXPECT_GT(certified, 1000);
}

// Mass on the non-negative set under the coldness rule.
TEST_F(IndexProperty, NonNegativeSetKeepsDeltaMass) {
  for (double delta : {0.1, 0.5, 0.9}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t k = 2 + trial % 50;
      IndexSnapshot s;
      s.index = random_vec(k, -1.0, 1.0);
      const double g = coldness(s, delta);
      if (s.suboptimal_set_size == 0 || s.coldness_floored) continue;
      const auto p = softmax_policy(s.index, g);
      double upper = 0.0;
      for (std::size_t i = 0; i < k; ++i) upper += s.index[i] >= 0.0 ? p[i] : 0.0;
      EXPECT_GE(upper, delta - 1e-12);
    }
  }
}
