#include "gai/linear_state.hpp"

#include <cmath>
#include <string>

namespace gai {

LinearState LinearState::one_hot(std::size_t arms) {
  if (arms < 1) throw std::invalid_argument("LinearState needs >= 1 arm");
  LinearState s;
  const auto n = static_cast<Eigen::Index>(arms);
  s.diag_ = Eigen::VectorXd::Ones(n);
  s.response_ = Eigen::VectorXd::Zero(n);
  s.pulls_.assign(arms, 0);
  s.sums_.assign(arms, 0.0);
  return s;
}

LinearState LinearState::dense(Eigen::MatrixXd features) {
  if (features.cols() < 1 || features.rows() < 1) {
    throw std::invalid_argument("LinearState needs >= 1 arm and dimension >= 1");
  }
  LinearState s;
  const auto d = features.rows();
  const auto k = static_cast<std::size_t>(features.cols());
  s.features_ = std::make_shared<const Eigen::MatrixXd>(std::move(features));
  s.gram_ = Eigen::MatrixXd::Identity(d, d);
  s.response_ = Eigen::VectorXd::Zero(d);
  s.pulls_.assign(k, 0);
  s.sums_.assign(k, 0.0);
  return s;
}

LinearState LinearState::for_instance(const BanditInstance& instance) {
  if (instance.one_hot()) return one_hot(instance.arms());
  return dense(*instance.features());
}

std::size_t LinearState::dim() const {
  return static_cast<std::size_t>(features_ ? gram_.rows() : diag_.size());
}

void LinearState::check_arm(std::size_t arm) const {
  if (arm >= pulls_.size()) {
    throw std::out_of_range("arm index " + std::to_string(arm) + " out of range");
  }
}

void LinearState::update(std::size_t arm, double reward) {
  check_arm(arm);
  if (features_) {
    update(features_->col(static_cast<Eigen::Index>(arm)), arm, reward);
    return;
  }
  const auto i = static_cast<Eigen::Index>(arm);
  diag_(i) += 1.0;
  response_(i) += reward;
  pulls_[arm] += 1;
  sums_[arm] += reward;
  ++round_;
}

void LinearState::update(const Eigen::VectorXd& x, std::size_t arm, double reward) {
  check_arm(arm);
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  if (!features_) {
    const auto i = static_cast<Eigen::Index>(arm);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x(j) != (j == i ? 1.0 : 0.0)) {
        throw std::invalid_argument("diagonal LinearState accepts one-hot features only");
      }
    }
    update(arm, reward);
    return;
  }
  gram_.noalias() += x * x.transpose();
  response_.noalias() += x * reward;
  pulls_[arm] += 1;
  sums_[arm] += reward;
  ++round_;
  dirty_ = true;
}

void LinearState::refresh() const {
  if (!dirty_) return;
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error("Gram matrix Cholesky factorization failed");
  }
  theta_ = llt_.solve(response_);
  dirty_ = false;
}

double LinearState::ridge_mean(std::size_t arm) const {
  check_arm(arm);
  if (!features_) {
    const auto i = static_cast<Eigen::Index>(arm);
    return response_(i) / diag_(i);
  }
  refresh();
  return features_->col(static_cast<Eigen::Index>(arm)).dot(theta_);
}

double LinearState::feature_norm(std::size_t arm) const {
  check_arm(arm);
  if (!features_) {
    return 1.0 / std::sqrt(diag_(static_cast<Eigen::Index>(arm)));
  }
  return feature_norm(Eigen::VectorXd(features_->col(static_cast<Eigen::Index>(arm))));
}

double LinearState::ridge_mean(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  if (!features_) {
    return x.dot(response_.cwiseQuotient(diag_));
  }
  refresh();
  return x.dot(theta_);
}

double LinearState::feature_norm(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) {
    throw std::invalid_argument("feature dimension mismatch");
  }
  if (!features_) {
    return std::sqrt(x.cwiseAbs2().cwiseQuotient(diag_).sum());
  }
  refresh();
  // ||x||_{V^-1} = ||L^-1 x||_2 for V = L L^T.
  const Eigen::VectorXd z = llt_.matrixL().solve(x);
  return z.norm();
}

double LinearState::empirical_mean(std::size_t arm) const {
  check_arm(arm);
  if (pulls_[arm] == 0) {
    throw UndefinedStatistic("empirical mean of arm " + std::to_string(arm) +
                             " is undefined before its first pull");
  }
  return sums_[arm] / static_cast<double>(pulls_[arm]);
}

Eigen::MatrixXd LinearState::gram() const {
  if (features_) return gram_;
  return diag_.asDiagonal();
}

Eigen::VectorXd LinearState::response() const { return response_; }

}  // namespace gai
