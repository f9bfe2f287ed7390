#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "gai/bandit_instance.hpp"

namespace gai {

/// Thrown by statistics that are undefined for an unpulled arm.
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Online ridge statistics V_t = I + sum x x^T, b_t = sum x y plus per-arm
/// pull counts and reward sums.
///
/// Two storage layouts share one interface. The diagonal layout is exact for
/// one-hot arms and keeps V_t as the vector (1 + N_i). The dense layout holds
/// the full Gram matrix and answers queries through a cached Cholesky
/// factorization that is refreshed lazily after updates; no inverse is formed.
class LinearState {
 public:
  static LinearState one_hot(std::size_t arms);
  // Column i of `features` is arm i's vector.
  static LinearState dense(Eigen::MatrixXd features);
  static LinearState for_instance(const BanditInstance& instance);

  // Rank-1 update with the arm's own feature vector.
  void update(std::size_t arm, double reward);
  // Rank-1 update with an explicit vector. In the diagonal layout `x` must be
  // the one-hot vector of `arm`.
  void update(const Eigen::VectorXd& x, std::size_t arm, double reward);

  double ridge_mean(std::size_t arm) const;
  double feature_norm(std::size_t arm) const;
  double ridge_mean(const Eigen::VectorXd& x) const;
  double feature_norm(const Eigen::VectorXd& x) const;

  // reward_sum / pull_count; throws UndefinedStatistic when the arm is unpulled.
  double empirical_mean(std::size_t arm) const;

  std::int64_t pull_count(std::size_t arm) const { return pulls_.at(arm); }
  double reward_sum(std::size_t arm) const { return sums_.at(arm); }
  std::int64_t round() const { return round_; }
  std::size_t arms() const { return pulls_.size(); }
  std::size_t dim() const;
  bool diagonal() const { return features_ == nullptr; }

  Eigen::MatrixXd gram() const;
  Eigen::VectorXd response() const;

 private:
  LinearState() = default;
  void refresh() const;
  void check_arm(std::size_t arm) const;

  std::shared_ptr<const Eigen::MatrixXd> features_;  // null => diagonal layout
  Eigen::VectorXd diag_;                              // diagonal layout: 1 + N_i
  Eigen::MatrixXd gram_;                              // dense layout
  Eigen::VectorXd response_;
  std::vector<std::int64_t> pulls_;
  std::vector<double> sums_;
  std::int64_t round_ = 0;

  mutable bool dirty_ = true;
  mutable Eigen::LLT<Eigen::MatrixXd> llt_;
  mutable Eigen::VectorXd theta_;
};

}  // namespace gai
