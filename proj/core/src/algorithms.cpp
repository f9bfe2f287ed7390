#include "gai/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gai/ucb_index.hpp"

namespace gai {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::HDoC: return "HDoC";
    case Algorithm::LUCBG: return "LUCB-G";
    case Algorithm::APTG: return "APT-G";
    case Algorithm::TTTS: return "TT-TS";
    case Algorithm::SoftUCBG: return "SoftUCB-G";
    case Algorithm::DGAI: return "DGAI";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::HDoC, Algorithm::LUCBG, Algorithm::APTG,
                      Algorithm::TTTS, Algorithm::SoftUCBG, Algorithm::DGAI}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

void AlgorithmSpec::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double dp = policy_delta();
  if (!(dp > 0.0 && dp < 1.0)) {
    throw std::invalid_argument("delta_policy must lie in (0, 1)");
  }
  if (!(hyper.alpha >= 0.0) || !(hyper.beta >= 0.0)) {
    throw std::invalid_argument("alpha and beta must be >= 0");
  }
  if (!(hyper.ts_resample_prob >= 0.0 && hyper.ts_resample_prob <= 1.0)) {
    throw std::invalid_argument("ts_resample_prob must lie in [0, 1]");
  }
}

namespace {

bool uses_ridge(Algorithm a) {
  return a == Algorithm::SoftUCBG || a == Algorithm::DGAI;
}

class Episode {
 public:
  Episode(const AlgorithmSpec& spec, const BanditInstance& instance,
          std::int64_t horizon, std::uint64_t seed, const EpisodeOptions& options)
      : spec_(spec),
        hyper_(spec.hyper),
        instance_(instance),
        horizon_(horizon),
        options_(options),
        state_(LinearState::for_instance(instance)),
        policy_rng_(make_rng(seed, 0)) {
    const std::size_t k = instance.arms();
    arm_rngs_.reserve(k);
    for (std::size_t i = 0; i < k; ++i) arm_rngs_.push_back(make_rng(seed, i + 1));
    active_.resize(k);
    for (std::size_t i = 0; i < k; ++i) active_[i] = static_cast<std::uint32_t>(i);
    trace_.horizon = horizon;
    trace_.ledger = IdentificationLedger(k);
    trace_.pulls.reserve(static_cast<std::size_t>(std::min<std::int64_t>(horizon, 1 << 22)));
    if (options_.buffer) options_.buffer->clear();
  }

  RunTrace run() {
    const std::size_t k = instance_.arms();
    std::int64_t t = 0;
    // Initial sweep: one pull per arm, no identification.
    for (std::size_t i = 0; i < k; ++i) {
      ++t;
      if (options_.buffer) record_round(t, 0.0, false, false);
      pull(t, i, false);
      if (options_.log_policy) log_point_mass(i);
      if (options_.after_round) options_.after_round(t, state_, options_.buffer, hyper_);
    }
    while (t < horizon_ && !active_.empty()) {
      ++t;
      const std::size_t arm = select(t);
      pull(t, arm, options_.identify);
      if (options_.after_round) options_.after_round(t, state_, options_.buffer, hyper_);
    }
    trace_.ledger.close(t);
    return std::move(trace_);
  }

 private:
  void pull(std::int64_t t, std::size_t arm, bool identify) {
    const RewardSample y = sample_reward(instance_, arm, arm_rngs_[arm], t);
    state_.update(arm, y.value);
    trace_.pulls.push_back(Pull{t, static_cast<std::uint32_t>(arm), y.value});
    if (options_.buffer) {
      options_.buffer->set_last_outcome(static_cast<std::uint32_t>(arm), y.value);
    }
    if (!identify) return;

    Verdict v;
    if (spec_.name == Algorithm::DGAI) {
      v = dgai_identify(state_.ridge_mean(arm), hyper_.alpha, state_.feature_norm(arm),
                        instance_.threshold());
    } else {
      const double radius =
          union_identification_bound(state_.pull_count(arm), instance_.arms(), spec_.delta);
      v = interval_verdict(state_.empirical_mean(arm), radius, instance_.threshold());
    }
    if (v == Verdict::Good) {
      trace_.ledger.mark_good(arm, t);
      remove_active(arm);
    } else if (v == Verdict::Bad) {
      trace_.ledger.mark_bad(arm, t);
      remove_active(arm);
    }
  }

  void remove_active(std::size_t arm) {
    auto it = std::find(active_.begin(), active_.end(), static_cast<std::uint32_t>(arm));
    active_.erase(it);
  }

  void fill_ridge() {
    means_.resize(active_.size());
    norms_.resize(active_.size());
    for (std::size_t j = 0; j < active_.size(); ++j) {
      means_[j] = state_.ridge_mean(active_[j]);
      norms_[j] = state_.feature_norm(active_[j]);
    }
  }

  void record_round(std::int64_t t, double gamma, bool policy_round, bool floored) {
    fill_ridge();
    // Outcome is filled in by pull().
    options_.buffer->append(t, gamma, policy_round, floored, active_, means_, norms_, 0, 0.0);
  }

  std::size_t select(std::int64_t t) {
    switch (spec_.name) {
      case Algorithm::HDoC:
        return argmax_active([&](std::size_t i) {
          return hdoc_ucb(state_.empirical_mean(i), state_.pull_count(i), t);
        });
      case Algorithm::LUCBG:
        return argmax_active([&](std::size_t i) {
          return lucbg_ucb(state_.empirical_mean(i), state_.pull_count(i), instance_.arms(),
                           spec_.delta, hyper_.lucb_include_t ? t : 0);
        });
      case Algorithm::APTG:
        if (hyper_.apt_argmin) {
          return argmax_active([&](std::size_t i) {
            const double mean = state_.empirical_mean(i);
            return -std::sqrt(static_cast<double>(state_.pull_count(i))) *
                   std::abs(instance_.threshold() - mean);
          });
        }
        return argmax_active([&](std::size_t i) {
          return aptg_index(state_.empirical_mean(i), state_.pull_count(i),
                            instance_.threshold());
        });
      case Algorithm::TTTS: return select_ttts();
      case Algorithm::SoftUCBG:
      case Algorithm::DGAI: return select_softmax(t);
    }
    throw std::logic_error("unknown algorithm");
  }

  template <class Score>
  std::size_t argmax_active(Score score) {
    std::size_t best = active_.front();
    double best_score = score(best);
    for (std::size_t j = 1; j < active_.size(); ++j) {
      const double s = score(active_[j]);
      if (s > best_score) {
        best_score = s;
        best = active_[j];
      }
    }
    if (options_.log_policy) log_point_mass(best);
    return best;
  }

  std::size_t select_ttts() {
    posteriors_.resize(active_.size());
    for (std::size_t j = 0; j < active_.size(); ++j) {
      const std::size_t i = active_[j];
      const double n = static_cast<double>(state_.pull_count(i));
      const double s = std::clamp(state_.reward_sum(i), 0.0, n);
      posteriors_[j] = BetaPosterior{1.0 + s, 1.0 + n - s};
    }
    const std::size_t j = tt_ts_select(posteriors_, hyper_.ts_resample_prob, policy_rng_);
    if (options_.log_policy) log_point_mass(active_[j]);
    return active_[j];
  }

  std::size_t select_softmax(std::int64_t t) {
    fill_ridge();
    compute_index(means_, norms_, hyper_.beta, snapshot_);
    const double gamma = coldness(snapshot_, spec_.policy_delta());
    snapshot_.policy.resize(active_.size());
    softmax_policy(snapshot_.index, gamma, snapshot_.policy);
    if (options_.buffer) {
      options_.buffer->append(t, gamma, true, snapshot_.coldness_floored, active_, means_,
                              norms_, 0, 0.0);
    }
    const std::size_t j = sample_arm(snapshot_.policy, policy_rng_);
    if (options_.log_policy) {
      std::vector<double> full(instance_.arms(), 0.0);
      for (std::size_t m = 0; m < active_.size(); ++m) full[active_[m]] = snapshot_.policy[m];
      trace_.policy_log.push_back(std::move(full));
    }
    return active_[j];
  }

  void log_point_mass(std::size_t arm) {
    std::vector<double> full(instance_.arms(), 0.0);
    full[arm] = 1.0;
    trace_.policy_log.push_back(std::move(full));
  }

  const AlgorithmSpec& spec_;
  AlgorithmHyper hyper_;
  const BanditInstance& instance_;
  std::int64_t horizon_;
  const EpisodeOptions& options_;
  LinearState state_;
  Rng policy_rng_;
  std::vector<Rng> arm_rngs_;
  std::vector<std::uint32_t> active_;
  std::vector<double> means_;
  std::vector<double> norms_;
  std::vector<BetaPosterior> posteriors_;
  IndexSnapshot snapshot_;
  RunTrace trace_;
};

}  // namespace

RunTrace run_gai_episode(const AlgorithmSpec& spec, const BanditInstance& instance,
                         std::int64_t horizon, std::uint64_t seed,
                         const EpisodeOptions& options) {
  spec.validate();
  if (horizon < static_cast<std::int64_t>(instance.arms())) {
    throw std::invalid_argument("horizon must be >= number of arms");
  }
  EpisodeOptions effective = options;
  if (!uses_ridge(spec.name)) effective.buffer = nullptr;
  Episode episode(spec, instance, horizon, seed, effective);
  return episode.run();
}

}  // namespace gai
