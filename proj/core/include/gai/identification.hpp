#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "gai/random.hpp"

namespace gai {

enum class Verdict { Good, Bad, Undecided };

// Sampling bounds of the classical baselines. `pulls` is N_i(t) >= 1.

/// HDoC: mean + sqrt(log t / (2 N)).
double hdoc_ucb(double mean, std::int64_t pulls, std::int64_t round);

/// LUCB-G: mean + sqrt(log(4 K N^2 / delta) / (2 N)). With `round` > 0 the
/// log argument is additionally multiplied by t (the alternative reading of
/// the bonus). The log is floored at 0.
double lucbg_ucb(double mean, std::int64_t pulls, std::size_t arms, double delta,
                 std::int64_t round = 0);

/// APT-G: mean + sqrt(N) |xi - mean|.
double aptg_index(double mean, std::int64_t pulls, double threshold);

/// Shared baseline identification radius sqrt(log(4 K N^2 / delta) / (2 N)),
/// with the log floored at 0.
double union_identification_bound(std::int64_t pulls, std::size_t arms, double delta);

/// Good if mean - radius >= xi, Bad if mean + radius < xi.
Verdict interval_verdict(double mean, double radius, double threshold);

/// DGAI's rule: interval_verdict on the ridge mean with radius alpha * norm.
Verdict dgai_identify(double ridge_mean, double alpha, double norm, double threshold);

struct BetaPosterior {
  double a = 1.0;
  double b = 1.0;
};

/// Top-two Thompson sampling. Draws theta_i ~ Beta(a_i, b_i); with probability
/// `resample_prob` returns the argmax, otherwise redraws until a different
/// argmax appears (at most 100 redraws, then the runner-up of the last draw).
std::size_t tt_ts_select(std::span<const BetaPosterior> posteriors,
                         double resample_prob, Rng& rng);

}  // namespace gai
