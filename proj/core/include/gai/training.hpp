#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gai/algorithms.hpp"
#include "gai/bandit_instance.hpp"
#include "gai/run_trace.hpp"
#include "gai/trajectory.hpp"

namespace gai {

/// Raised when a trained confidence scale leaves the sane range.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDivergenceLimit = 1e6;

struct TrainableParams {
  double alpha = 0.0;  // identification scale
  double beta = 0.0;   // sampling scale
  double learning_rate = 0.1;
  double eta1 = 1e-3;
  double eta2 = 1e-3;
  double sharpness_M = 100.0;
  std::int64_t batch_size = 128;  // online updates every b rounds

  void validate() const;
};

enum class Objective { Sampling, Identification, Combined };

struct Gradient {
  double alpha = 0.0;
  double beta = 0.0;
};

double sigmoid(double x);

// Offline objectives. Sums run over every recorded round and every arm that was
// active in it; policy terms only over rounds whose arm came from the softmax
// policy. The policy is rebuilt from the stored means, norms and coldness at
// the requested scale. `targets[i]` stands in for arm i's mean: the true mean
// offline, the current estimate online.

/// sum_t sum_i p_i(beta) mu_i - sum_t sum_i (eta1 C + eta2 |C|),
/// C = |mu_i - mean_i,t| - beta ||x_i||.
double sampling_objective(const TrajectoryBuffer& buffer, std::span<const double> targets,
                          double beta, double eta1, double eta2);
double sampling_objective(const TrajectoryBuffer& buffer, const BanditInstance& instance,
                          double beta, double eta1, double eta2);

/// sum_t sum_i sigma((mean - alpha ||x|| - xi) M) (mean - xi) - sum (eta1 D + eta2 |D|),
/// D = alpha ||x_i|| - |mu_i - mean_i,t|.
double identification_objective(const TrajectoryBuffer& buffer,
                                std::span<const double> targets, double alpha, double M,
                                double eta1, double eta2, double threshold);
double identification_objective(const TrajectoryBuffer& buffer,
                                const BanditInstance& instance, double alpha, double M,
                                double eta1, double eta2, double threshold);

/// sum_t sum_i p_i mu_i with p = softmax(gamma S_i(beta) I_i(alpha)),
/// I_i = sigma((mean - alpha ||x|| - xi) M).
double combined_objective(const TrajectoryBuffer& buffer, std::span<const double> targets,
                          double alpha, double beta, double M, double threshold);

/// Analytic derivative of the chosen objective; coldness is held at its
/// recorded value and |C|, |D| take subgradient 0 at 0. Rounds whose coldness
/// denominator hit its floor add no policy-gradient term.
Gradient gradient(Objective objective, const TrajectoryBuffer& buffer,
                  std::span<const double> targets, double threshold,
                  const TrainableParams& params);
Gradient gradient(Objective objective, const TrajectoryBuffer& buffer,
                  const BanditInstance& instance, const TrainableParams& params);

/// softmax of coldness * S_i * I_i.
std::vector<double> combined_policy(std::span<const double> index,
                                    std::span<const double> screening, double coldness);

// ---------------------------------------------------------------------------
// Training loops.

struct EpochRecord {
  int epoch = 0;
  double alpha = 0.0;  // after this epoch's update
  double beta = 0.0;
  double exploit_score = 0.0;      // of this epoch's trajectory
  double cumulative_reward = 0.0;  // of this epoch's trajectory
};

struct OfflineOptions {
  // DGAI trains alpha and beta; SoftUCBG trains beta only.
  Algorithm algorithm = Algorithm::DGAI;
  double delta = 0.1;
  std::optional<double> delta_policy;
};

struct OfflineResult {
  std::vector<EpochRecord> epochs;
  TrainableParams final_params;
  RunTrace final_trace;  // trajectory of the last epoch
};

/// Runs `epochs` full episodes on the same arm set and seed; after each, one
/// gradient-ascent step on beta (sampling objective) and, for DGAI, on alpha
/// (identification objective). Scales are projected onto [0, inf).
OfflineResult offline_train(const BanditInstance& instance, int epochs,
                            std::int64_t horizon, const TrainableParams& params,
                            std::uint64_t seed, const OfflineOptions& options = {});

/// Bootstrapped cumulative objective at round t:
/// (sum_{s<=t} R_s + (T - t) R_t) / T, with R_s the per-round terms of the
/// chosen objective at `params`.
double online_surrogate(const TrajectoryBuffer& buffer, std::int64_t t,
                        std::int64_t horizon, Objective objective,
                        std::span<const double> targets, double threshold,
                        const TrainableParams& params);

/// One batched ascent step on the bootstrapped objective at round t. The
/// observed part is fixed; the bootstrapped R_t is the average per-round term
/// over the last `batch_size` records. Sampling/Identification move beta/alpha
/// respectively; Combined moves both.
TrainableParams online_train_step(const TrajectoryBuffer& buffer, std::int64_t t,
                                  std::int64_t horizon, Objective objective,
                                  std::span<const double> targets, double threshold,
                                  const TrainableParams& params);

struct OnlineOptions {
  double delta = 0.1;
  std::optional<double> delta_policy;
  bool log_policy = false;
};

/// Single DGAI episode with (alpha, beta) updated every batch_size rounds.
RunTrace online_train(const BanditInstance& instance, std::int64_t horizon,
                      const TrainableParams& params, std::uint64_t seed,
                      const OnlineOptions& options = {});

/// Cumulative-reward bandit with threshold screening: every arm stays in play,
/// arms are drawn from combined_policy, and (alpha, beta) are trained jointly
/// online on the combined objective.
RunTrace mab_threshold_train(const BanditInstance& instance, std::int64_t horizon,
                             const TrainableParams& params, std::uint64_t seed,
                             const OnlineOptions& options = {});

}  // namespace gai
