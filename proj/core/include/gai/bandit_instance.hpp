#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gai/random.hpp"

namespace gai {

enum class RewardLaw { Bernoulli, Gaussian };

std::string to_string(RewardLaw law);

struct RewardSample {
  std::size_t arm = 0;
  double value = 0.0;
  std::int64_t round = 0;
};

/// Ground-truth arm set for one good-arm-identification problem.
///
/// Arms are either one-hot (feature i = e_i, the default and the only layout
/// the real-data loaders produce) or carry an explicit d x K feature matrix
/// whose column i is arm i's vector. Instances are immutable and cheap to
/// copy; the feature matrix is shared.
class BanditInstance {
 public:
  BanditInstance(std::vector<double> means, double threshold,
                 RewardLaw law = RewardLaw::Bernoulli, double sigma = 0.0);

  BanditInstance(Eigen::MatrixXd features, std::vector<double> means,
                 double threshold, RewardLaw law = RewardLaw::Bernoulli,
                 double sigma = 0.0);

  std::size_t arms() const { return means_.size(); }
  std::size_t dim() const;
  bool one_hot() const { return features_ == nullptr; }

  Eigen::VectorXd feature(std::size_t arm) const;
  // nullptr for one-hot instances.
  const Eigen::MatrixXd* features() const { return features_.get(); }

  std::span<const double> means() const { return means_; }
  double mean(std::size_t arm) const { return means_.at(arm); }
  double threshold() const { return threshold_; }
  RewardLaw law() const { return law_; }
  double sigma() const { return sigma_; }

  bool is_good(std::size_t arm) const { return means_.at(arm) >= threshold_; }
  std::vector<std::size_t> good_set() const;
  std::size_t good_count() const;
  // Highest true mean, ties to the lowest index.
  std::size_t best_arm() const;

 private:
  void validate() const;

  std::shared_ptr<const Eigen::MatrixXd> features_;
  std::vector<double> means_;
  double threshold_;
  RewardLaw law_;
  double sigma_;
};

/// K one-hot Bernoulli arms with means i.i.d. uniform on [mean_low, mean_high].
BanditInstance make_synthetic_instance(std::size_t k, double mean_low,
                                       double mean_high, double threshold,
                                       std::uint64_t seed);

/// One draw from `arm`'s reward law. Throws std::out_of_range for a bad arm.
RewardSample sample_reward(const BanditInstance& instance, std::size_t arm,
                           Rng& rng, std::int64_t round = 0);

}  // namespace gai
