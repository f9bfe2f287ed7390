#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gai/random.hpp"

namespace gai {

// Floor applied to the largest non-negative index before it divides the
// coldness numerator.
inline constexpr double kColdnessDenominatorFloor = 1e-12;

/// Per-round quantities of the differentiable UCB index.
///
/// `radii` are the unscaled widths U_i (||x_i||_{V^-1} for the linear model);
/// the best-LCB arm is chosen on means - radii and the sampling scale beta
/// enters only through S_i = beta * phi_i - gap_i.
struct IndexSnapshot {
  std::vector<double> radii;
  std::vector<double> gap_estimates;
  std::vector<double> phi;
  std::vector<double> index;
  std::vector<double> policy;
  std::size_t best_lcb_arm = 0;
  double coldness = 0.0;
  std::size_t suboptimal_set_size = 0;  // |{i : S_i < 0}|
  double s_max_nonneg = 0.0;            // max S_i over S_i >= 0
  bool coldness_floored = false;        // s_max_nonneg fell below the floor

  std::size_t arms() const { return index.size(); }
};

/// Fills radii, i*, phi, gap estimates and S. Reuses `out`'s storage.
void compute_index(std::span<const double> means, std::span<const double> radii,
                   double beta, IndexSnapshot& out);
IndexSnapshot compute_index(std::span<const double> means,
                            std::span<const double> radii, double beta);

/// gamma = log(delta |L| / (1 - delta)) / S_max over the snapshot's index,
/// with |L| floored at 1, S_max floored at kColdnessDenominatorFloor and the
/// result clamped to >= 0. Records |L|, S_max and gamma in the snapshot.
double coldness(IndexSnapshot& snapshot, double delta);

/// Max-subtracted softmax of coldness * index.
void softmax_policy(std::span<const double> index, double coldness,
                    std::span<double> out);
std::vector<double> softmax_policy(std::span<const double> index, double coldness);

/// Categorical draw; consumes exactly one uniform from `rng`.
std::size_t sample_arm(std::span<const double> policy, Rng& rng);

}  // namespace gai
