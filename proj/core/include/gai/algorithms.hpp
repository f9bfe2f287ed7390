#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "gai/bandit_instance.hpp"
#include "gai/identification.hpp"
#include "gai/linear_state.hpp"
#include "gai/run_trace.hpp"
#include "gai/trajectory.hpp"

namespace gai {

enum class Algorithm { HDoC, LUCBG, APTG, TTTS, SoftUCBG, DGAI };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct AlgorithmHyper {
  double alpha = 0.0;  // DGAI identification scale
  double beta = 0.0;   // SoftUCB-G / DGAI sampling scale
  // delta used inside the coldness formula; defaults to the acceptance rate.
  std::optional<double> delta_policy;
  double ts_resample_prob = 0.5;
  bool apt_argmin = false;      // canonical APT: argmin sqrt(N) |xi - mean|
  bool lucb_include_t = false;  // multiply the LUCB-G log argument by t
};

struct AlgorithmSpec {
  Algorithm name = Algorithm::HDoC;
  double delta = 0.1;
  AlgorithmHyper hyper;

  double policy_delta() const { return hyper.delta_policy.value_or(delta); }
  void validate() const;
};

/// Called after every round of an episode (after identification). May adjust
/// the hyper-parameters used from the next round on.
using RoundHook = std::function<void(std::int64_t round, const LinearState& state,
                                     const TrajectoryBuffer* buffer,
                                     AlgorithmHyper& hyper)>;

struct EpisodeOptions {
  bool identify = true;  // false: sampling rule only, every arm stays active
  bool log_policy = false;
  TrajectoryBuffer* buffer = nullptr;  // filled for SoftUCB-G and DGAI
  RoundHook after_round;
};

/// One GAI episode: pull each arm once, then repeatedly pull an active arm
/// chosen by the algorithm's sampling rule and test only that arm against its
/// identification rule, removing it once decided. Stops when no arm is
/// active or after `horizon` pulls; arms still active then are Undecided.
///
/// Rewards of arm i come from their own stream, so two runs with one seed see
/// the same n-th reward of every arm whatever order they pull arms in.
RunTrace run_gai_episode(const AlgorithmSpec& spec, const BanditInstance& instance,
                         std::int64_t horizon, std::uint64_t seed,
                         const EpisodeOptions& options = {});

}  // namespace gai
