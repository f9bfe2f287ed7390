#include "gai/bandit_instance.hpp"

#include <cmath>

namespace gai {

std::string to_string(RewardLaw law) {
  return law == RewardLaw::Bernoulli ? "bernoulli" : "gaussian";
}

BanditInstance::BanditInstance(std::vector<double> means, double threshold,
                               RewardLaw law, double sigma)
    : means_(std::move(means)), threshold_(threshold), law_(law), sigma_(sigma) {
  validate();
}

BanditInstance::BanditInstance(Eigen::MatrixXd features,
                               std::vector<double> means, double threshold,
                               RewardLaw law, double sigma)
    : features_(std::make_shared<const Eigen::MatrixXd>(std::move(features))),
      means_(std::move(means)),
      threshold_(threshold),
      law_(law),
      sigma_(sigma) {
  validate();
  if (static_cast<std::size_t>(features_->cols()) != means_.size()) {
    throw std::invalid_argument("feature matrix needs one column per arm");
  }
  if (features_->rows() < 1) {
    throw std::invalid_argument("feature dimension must be >= 1");
  }
}

void BanditInstance::validate() const {
  if (means_.empty()) {
    throw std::invalid_argument("bandit instance needs at least one arm");
  }
  if (!std::isfinite(threshold_)) {
    throw std::invalid_argument("threshold must be finite");
  }
  for (double mu : means_) {
    if (!std::isfinite(mu)) {
      throw std::invalid_argument("arm means must be finite");
    }
    if (law_ == RewardLaw::Bernoulli && (mu < 0.0 || mu > 1.0)) {
      throw std::invalid_argument("Bernoulli arm means must lie in [0, 1]");
    }
  }
  if (law_ == RewardLaw::Gaussian && !(sigma_ >= 0.0)) {
    throw std::invalid_argument("Gaussian noise sigma must be >= 0");
  }
}

std::size_t BanditInstance::dim() const {
  return features_ ? static_cast<std::size_t>(features_->rows()) : means_.size();
}

Eigen::VectorXd BanditInstance::feature(std::size_t arm) const {
  if (arm >= arms()) {
    throw std::out_of_range("arm index out of range");
  }
  if (features_) {
    return features_->col(static_cast<Eigen::Index>(arm));
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(arms()));
  e(static_cast<Eigen::Index>(arm)) = 1.0;
  return e;
}

std::vector<std::size_t> BanditInstance::good_set() const {
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (means_[i] >= threshold_) good.push_back(i);
  }
  return good;
}

std::size_t BanditInstance::good_count() const {
  std::size_t m = 0;
  for (double mu : means_) m += mu >= threshold_ ? 1 : 0;
  return m;
}

std::size_t BanditInstance::best_arm() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < means_.size(); ++i) {
    if (means_[i] > means_[best]) best = i;
  }
  return best;
}

BanditInstance make_synthetic_instance(std::size_t k, double mean_low,
                                       double mean_high, double threshold,
                                       std::uint64_t seed) {
  if (k < 1) {
    throw std::invalid_argument("synthetic instance needs k >= 1");
  }
  if (!(mean_low <= mean_high)) {
    throw std::invalid_argument("mean_low must not exceed mean_high");
  }
  if (mean_low < 0.0 || mean_high > 1.0) {
    throw std::invalid_argument("Bernoulli mean band must lie within [0, 1]");
  }
  Rng rng = make_rng(seed);
  std::vector<double> means(k);
  for (auto& mu : means) {
    mu = mean_low + (mean_high - mean_low) * uniform01(rng);
  }
  return BanditInstance(std::move(means), threshold, RewardLaw::Bernoulli);
}

RewardSample sample_reward(const BanditInstance& instance, std::size_t arm,
                           Rng& rng, std::int64_t round) {
  if (arm >= instance.arms()) {
    throw std::out_of_range("sample_reward: arm index out of range");
  }
  const double mu = instance.mean(arm);
  double value = 0.0;
  if (instance.law() == RewardLaw::Bernoulli) {
    value = bernoulli(rng, mu) ? 1.0 : 0.0;
  } else {
    value = normal(rng, mu, instance.sigma());
  }
  return RewardSample{arm, value, round};
}

}  // namespace gai
