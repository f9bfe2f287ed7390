#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gai/random.hpp"
#include "gai/trajectory.hpp"

namespace gai::testing {

// A hand-built trajectory with random means, norms, coldness and targets.
struct RandomCase {
  TrajectoryBuffer buffer;
  std::vector<double> targets;
  double threshold = 0.5;
};

inline RandomCase random_case(Rng& rng, std::size_t arms, std::size_t rounds) {
  RandomCase c;
  c.targets.resize(arms);
  for (double& t : c.targets) t = uniform01(rng);
  c.threshold = 0.2 + 0.6 * uniform01(rng);
  std::vector<std::uint32_t> ids;
  std::vector<double> means, norms;
  for (std::size_t r = 0; r < rounds; ++r) {
    ids.clear();
    means.clear();
    norms.clear();
    for (std::uint32_t i = 0; i < arms; ++i) {
      if (arms > 1 && uniform01(rng) < 0.2) continue;  // some arms already removed
      ids.push_back(i);
      means.push_back(uniform01(rng));
      norms.push_back(0.05 + 0.5 * uniform01(rng));
    }
    if (ids.empty()) {
      ids.push_back(0);
      means.push_back(uniform01(rng));
      norms.push_back(0.3);
    }
    const bool policy = r > 0 || uniform01(rng) < 0.5;
    const double gamma = policy ? 0.5 + 10.0 * uniform01(rng) : 0.0;
    c.buffer.append(static_cast<std::int64_t>(r + 1), gamma, policy, false, ids, means,
                    norms, ids[0], 1.0);
  }
  return c;
}

// Distance from x to the nearest point where |target - mean| = x * norm, i.e.
// where an absolute-value penalty switches branch.
inline double nearest_kink(const RandomCase& c, double x) {
  double best = INFINITY;
  for (std::size_t r = 0; r < c.buffer.size(); ++r) {
    const RoundView v = c.buffer[r];
    for (std::size_t j = 0; j < v.arms.size(); ++j) {
      const double at = std::abs(c.targets[v.arms[j]] - v.means[j]) / v.norms[j];
      best = std::min(best, std::abs(at - x));
    }
  }
  return best;
}

}  // namespace gai::testing
