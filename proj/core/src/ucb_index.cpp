#include "gai/ucb_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gai {

void compute_index(std::span<const double> means, std::span<const double> radii,
                   double beta, IndexSnapshot& out) {
  const std::size_t k = means.size();
  if (k == 0) throw std::invalid_argument("compute_index: empty arm set");
  if (radii.size() != k) {
    throw std::invalid_argument("compute_index: means and radii differ in length");
  }

  std::size_t best = 0;
  double best_lcb = means[0] - radii[0];
  for (std::size_t i = 1; i < k; ++i) {
    const double lcb = means[i] - radii[i];
    if (lcb > best_lcb) {
      best_lcb = lcb;
      best = i;
    }
  }

  out.radii.assign(radii.begin(), radii.end());
  out.gap_estimates.resize(k);
  out.phi.resize(k);
  out.index.resize(k);
  out.best_lcb_arm = best;
  const double best_mean = means[best];
  const double best_radius = radii[best];
  for (std::size_t i = 0; i < k; ++i) {
    out.phi[i] = radii[i] + best_radius;
    out.gap_estimates[i] = i == best ? 0.0 : best_mean - means[i];
    out.index[i] = beta * out.phi[i] - out.gap_estimates[i];
  }
  out.policy.clear();
  out.coldness = 0.0;
  out.suboptimal_set_size = 0;
  out.s_max_nonneg = 0.0;
  out.coldness_floored = false;
}

IndexSnapshot compute_index(std::span<const double> means,
                            std::span<const double> radii, double beta) {
  IndexSnapshot snap;
  compute_index(means, radii, beta, snap);
  return snap;
}

double coldness(IndexSnapshot& snapshot, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("coldness: delta must lie in (0, 1)");
  }
  std::size_t suboptimal = 0;
  double s_max = -std::numeric_limits<double>::infinity();
  for (double s : snapshot.index) {
    if (s < 0.0) {
      ++suboptimal;
    } else {
      s_max = std::max(s_max, s);
    }
  }
  if (s_max == -std::numeric_limits<double>::infinity()) s_max = 0.0;
  snapshot.suboptimal_set_size = suboptimal;
  snapshot.s_max_nonneg = s_max;
  snapshot.coldness_floored = s_max < kColdnessDenominatorFloor;

  const double l = static_cast<double>(std::max<std::size_t>(suboptimal, 1));
  const double denom = std::max(s_max, kColdnessDenominatorFloor);
  const double gamma = std::log(delta * l / (1.0 - delta)) / denom;
  snapshot.coldness = std::max(gamma, 0.0);
  return snapshot.coldness;
}

void softmax_policy(std::span<const double> index, double coldness,
                    std::span<double> out) {
  if (out.size() != index.size()) {
    throw std::invalid_argument("softmax_policy: output size mismatch");
  }
  if (index.empty()) return;
  if (!(coldness >= 0.0)) {
    throw std::invalid_argument("softmax_policy: coldness must be >= 0");
  }
  double peak = -std::numeric_limits<double>::infinity();
  for (double s : index) peak = std::max(peak, coldness * s);
  double total = 0.0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    out[i] = std::exp(coldness * index[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
}

std::vector<double> softmax_policy(std::span<const double> index, double coldness) {
  std::vector<double> p(index.size());
  softmax_policy(index, coldness, p);
  return p;
}

std::size_t sample_arm(std::span<const double> policy, Rng& rng) {
  if (policy.empty()) throw std::invalid_argument("sample_arm: empty policy");
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < policy.size(); ++i) {
    if (policy[i] <= 0.0) continue;
    last_positive = i;
    cumulative += policy[i];
    if (u < cumulative) return i;
  }
  // Rounding left the cumulative mass just below u.
  return last_positive;
}

}  // namespace gai
