#include "gai/identification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gai {

namespace {

void require_pulls(std::int64_t pulls) {
  if (pulls < 1) throw std::invalid_argument("confidence bound needs N >= 1");
}

std::size_t argmax_of(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

double hdoc_ucb(double mean, std::int64_t pulls, std::int64_t round) {
  require_pulls(pulls);
  if (round < 1) throw std::invalid_argument("hdoc_ucb needs t >= 1");
  return mean + std::sqrt(std::log(static_cast<double>(round)) /
                          (2.0 * static_cast<double>(pulls)));
}

double lucbg_ucb(double mean, std::int64_t pulls, std::size_t arms, double delta,
                 std::int64_t round) {
  require_pulls(pulls);
  const double n = static_cast<double>(pulls);
  double arg = 4.0 * static_cast<double>(arms) * n * n / delta;
  if (round > 0) arg *= static_cast<double>(round);
  return mean + std::sqrt(std::max(std::log(arg), 0.0) / (2.0 * n));
}

double aptg_index(double mean, std::int64_t pulls, double threshold) {
  require_pulls(pulls);
  return mean + std::sqrt(static_cast<double>(pulls)) * std::abs(threshold - mean);
}

double union_identification_bound(std::int64_t pulls, std::size_t arms, double delta) {
  require_pulls(pulls);
  const double n = static_cast<double>(pulls);
  const double arg = 4.0 * static_cast<double>(arms) * n * n / delta;
  return std::sqrt(std::max(std::log(arg), 0.0) / (2.0 * n));
}

Verdict interval_verdict(double mean, double radius, double threshold) {
  if (mean - radius >= threshold) return Verdict::Good;
  if (mean + radius < threshold) return Verdict::Bad;
  return Verdict::Undecided;
}

Verdict dgai_identify(double ridge_mean, double alpha, double norm, double threshold) {
  return interval_verdict(ridge_mean, alpha * norm, threshold);
}

std::size_t tt_ts_select(std::span<const BetaPosterior> posteriors,
                         double resample_prob, Rng& rng) {
  const std::size_t k = posteriors.size();
  if (k == 0) throw std::invalid_argument("tt_ts_select: no arms");
  if (k == 1) return 0;

  std::vector<double> theta(k);
  auto draw = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      theta[i] = beta_variate(rng, posteriors[i].a, posteriors[i].b);
    }
  };
  draw();
  const std::size_t leader = argmax_of(theta);
  if (uniform01(rng) < resample_prob) return leader;

  constexpr int kMaxRedraws = 100;
  for (int r = 0; r < kMaxRedraws; ++r) {
    draw();
    const std::size_t challenger = argmax_of(theta);
    if (challenger != leader) return challenger;
  }
  // Runner-up of the last draw.
  std::size_t second = leader == 0 ? 1 : 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != leader && theta[i] > theta[second]) second = i;
  }
  return second;
}

}  // namespace gai
