#include "gai/training.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gai/linear_state.hpp"
#include "gai/metrics.hpp"
#include "gai/random.hpp"
#include "gai/ucb_index.hpp"

namespace gai {

void TrainableParams::validate() const {
  if (!(eta1 > 0.0) || !(eta2 > 0.0)) {
    throw std::invalid_argument("eta1 and eta2 must be > 0");
  }
  if (!(sharpness_M > 0.0)) throw std::invalid_argument("sharpness_M must be > 0");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    throw std::invalid_argument("alpha and beta must be >= 0");
  }
  if (!std::isfinite(learning_rate)) throw std::invalid_argument("learning_rate not finite");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

struct RoundTerms {
  double value = 0.0;
  double d_alpha = 0.0;
  double d_beta = 0.0;
};

struct Settings {
  double alpha = 0.0;
  double beta = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double M = 1.0;
  double threshold = 0.0;
};

// Per-round terms of the three objectives and their derivatives. Rounds whose
// coldness sat on the denominator floor carry gamma ~ 1e12 and contribute no
// policy gradient; their value terms are kept.
class RoundEvaluator {
 public:
  RoundTerms sampling(const RoundView& v, std::span<const double> targets,
                      const Settings& s) {
    RoundTerms out;
    for (std::size_t j = 0; j < v.arms.size(); ++j) {
      const double c = std::abs(targets[v.arms[j]] - v.means[j]) - s.beta * v.norms[j];
      out.value -= s.eta1 * c + s.eta2 * std::abs(c);
      out.d_beta += (s.eta1 + s.eta2 * sign(c)) * v.norms[j];
    }
    if (!v.policy_round) return out;
    compute_index(v.means, v.norms, s.beta, snap_);
    p_.resize(v.arms.size());
    softmax_policy(snap_.index, v.coldness, p_);
    const double reward = expected(v, targets);
    out.value += reward;
    if (!v.coldness_floored && v.coldness > 0.0) {
      double g = 0.0;
      for (std::size_t j = 0; j < p_.size(); ++j) {
        g += p_[j] * snap_.phi[j] * (targets[v.arms[j]] - reward);
      }
      out.d_beta += v.coldness * g;
    }
    return out;
  }

  RoundTerms identification(const RoundView& v, std::span<const double> targets,
                            const Settings& s) {
    RoundTerms out;
    for (std::size_t j = 0; j < v.arms.size(); ++j) {
      const double m = v.means[j];
      const double n = v.norms[j];
      const double sig = sigmoid((m - s.alpha * n - s.threshold) * s.M);
      out.value += sig * (m - s.threshold);
      out.d_alpha -= sig * (1.0 - sig) * s.M * n * (m - s.threshold);
      const double d = s.alpha * n - std::abs(targets[v.arms[j]] - m);
      out.value -= s.eta1 * d + s.eta2 * std::abs(d);
      out.d_alpha -= (s.eta1 + s.eta2 * sign(d)) * n;
    }
    return out;
  }

  RoundTerms combined(const RoundView& v, std::span<const double> targets,
                      const Settings& s) {
    RoundTerms out;
    if (!v.policy_round) return out;
    const std::size_t k = v.arms.size();
    compute_index(v.means, v.norms, s.beta, snap_);
    screen_.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      screen_[j] = sigmoid((v.means[j] - s.alpha * v.norms[j] - s.threshold) * s.M);
    }
    logits_.resize(k);
    for (std::size_t j = 0; j < k; ++j) logits_[j] = v.coldness * snap_.index[j] * screen_[j];
    p_.resize(k);
    softmax_policy(logits_, 1.0, p_);
    const double reward = expected(v, targets);
    out.value = reward;
    if (!v.coldness_floored && v.coldness > 0.0) {
      double ga = 0.0;
      double gb = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double w = p_[j] * (targets[v.arms[j]] - reward);
        gb += w * snap_.phi[j] * screen_[j];
        ga -= w * snap_.index[j] * screen_[j] * (1.0 - screen_[j]) * s.M * v.norms[j];
      }
      out.d_alpha = v.coldness * ga;
      out.d_beta = v.coldness * gb;
    }
    return out;
  }

  RoundTerms evaluate(Objective objective, const RoundView& v,
                      std::span<const double> targets, const Settings& s) {
    switch (objective) {
      case Objective::Sampling: return sampling(v, targets, s);
      case Objective::Identification: return identification(v, targets, s);
      case Objective::Combined: return combined(v, targets, s);
    }
    throw std::logic_error("unknown objective");
  }

 private:
  double expected(const RoundView& v, std::span<const double> targets) const {
    double r = 0.0;
    for (std::size_t j = 0; j < p_.size(); ++j) r += p_[j] * targets[v.arms[j]];
    return r;
  }

  IndexSnapshot snap_;
  std::vector<double> p_;
  std::vector<double> screen_;
  std::vector<double> logits_;
};

Settings settings_from(const TrainableParams& p, double threshold) {
  return Settings{p.alpha, p.beta, p.eta1, p.eta2, p.sharpness_M, threshold};
}

RoundTerms sum_terms(Objective objective, const TrajectoryBuffer& buffer,
                     std::span<const double> targets, const Settings& s) {
  RoundEvaluator eval;
  RoundTerms total;
  for (std::size_t r = 0; r < buffer.size(); ++r) {
    const RoundTerms t = eval.evaluate(objective, buffer[r], targets, s);
    total.value += t.value;
    total.d_alpha += t.d_alpha;
    total.d_beta += t.d_beta;
  }
  return total;
}

void check_targets(const TrajectoryBuffer& buffer, std::span<const double> targets) {
  for (std::size_t r = 0; r < buffer.size(); ++r) {
    for (std::uint32_t a : buffer[r].arms) {
      if (a >= targets.size()) throw std::invalid_argument("targets shorter than arm ids");
    }
  }
}

void guard(double alpha, double beta, const char* where, std::int64_t step) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || std::abs(alpha) > kDivergenceLimit ||
      std::abs(beta) > kDivergenceLimit) {
    std::ostringstream msg;
    msg << where << ": parameters diverged at step " << step << " (alpha=" << alpha
        << ", beta=" << beta << ")";
    throw DivergenceError(msg.str());
  }
}

}  // namespace

double sampling_objective(const TrajectoryBuffer& buffer, std::span<const double> targets,
                          double beta, double eta1, double eta2) {
  check_targets(buffer, targets);
  Settings s;
  s.beta = beta;
  s.eta1 = eta1;
  s.eta2 = eta2;
  return sum_terms(Objective::Sampling, buffer, targets, s).value;
}

double sampling_objective(const TrajectoryBuffer& buffer, const BanditInstance& instance,
                          double beta, double eta1, double eta2) {
  return sampling_objective(buffer, instance.means(), beta, eta1, eta2);
}

double identification_objective(const TrajectoryBuffer& buffer,
                                std::span<const double> targets, double alpha, double M,
                                double eta1, double eta2, double threshold) {
  check_targets(buffer, targets);
  Settings s;
  s.alpha = alpha;
  s.M = M;
  s.eta1 = eta1;
  s.eta2 = eta2;
  s.threshold = threshold;
  return sum_terms(Objective::Identification, buffer, targets, s).value;
}

double identification_objective(const TrajectoryBuffer& buffer,
                                const BanditInstance& instance, double alpha, double M,
                                double eta1, double eta2, double threshold) {
  return identification_objective(buffer, instance.means(), alpha, M, eta1, eta2, threshold);
}

double combined_objective(const TrajectoryBuffer& buffer, std::span<const double> targets,
                          double alpha, double beta, double M, double threshold) {
  check_targets(buffer, targets);
  Settings s;
  s.alpha = alpha;
  s.beta = beta;
  s.M = M;
  s.threshold = threshold;
  return sum_terms(Objective::Combined, buffer, targets, s).value;
}

Gradient gradient(Objective objective, const TrajectoryBuffer& buffer,
                  std::span<const double> targets, double threshold,
                  const TrainableParams& params) {
  check_targets(buffer, targets);
  const RoundTerms t = sum_terms(objective, buffer, targets, settings_from(params, threshold));
  return Gradient{t.d_alpha, t.d_beta};
}

Gradient gradient(Objective objective, const TrajectoryBuffer& buffer,
                  const BanditInstance& instance, const TrainableParams& params) {
  return gradient(objective, buffer, instance.means(), instance.threshold(), params);
}

std::vector<double> combined_policy(std::span<const double> index,
                                    std::span<const double> screening, double coldness) {
  if (index.size() != screening.size()) {
    throw std::invalid_argument("combined_policy: size mismatch");
  }
  std::vector<double> logits(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) logits[i] = coldness * index[i] * screening[i];
  return softmax_policy(logits, 1.0);
}

OfflineResult offline_train(const BanditInstance& instance, int epochs,
                            std::int64_t horizon, const TrainableParams& params,
                            std::uint64_t seed, const OfflineOptions& options) {
  if (epochs < 1) throw std::invalid_argument("offline_train: epochs must be >= 1");
  if (options.algorithm != Algorithm::DGAI && options.algorithm != Algorithm::SoftUCBG) {
    throw std::invalid_argument("offline_train: only DGAI and SoftUCB-G are trainable");
  }
  params.validate();

  OfflineResult result;
  TrainableParams current = params;
  TrajectoryBuffer buffer;
  std::vector<ParamPoint> log;
  for (int n = 1; n <= epochs; ++n) {
    AlgorithmSpec spec;
    spec.name = options.algorithm;
    spec.delta = options.delta;
    spec.hyper.alpha = current.alpha;
    spec.hyper.beta = current.beta;
    spec.hyper.delta_policy = options.delta_policy;

    buffer.begin_epoch(n);
    EpisodeOptions eo;
    eo.buffer = &buffer;
    RunTrace trace = run_gai_episode(spec, instance, horizon, seed, eo);

    const Settings s = settings_from(current, instance.threshold());
    const RoundTerms sampling = sum_terms(Objective::Sampling, buffer, instance.means(), s);
    current.beta = std::max(0.0, current.beta + current.learning_rate * sampling.d_beta);
    if (options.algorithm == Algorithm::DGAI) {
      const RoundTerms ident =
          sum_terms(Objective::Identification, buffer, instance.means(), s);
      current.alpha = std::max(0.0, current.alpha + current.learning_rate * ident.d_alpha);
    }
    guard(current.alpha, current.beta, "offline_train", n);

    result.epochs.push_back(EpochRecord{n, current.alpha, current.beta,
                                        exploit_score(trace, instance, horizon),
                                        cumulative_reward(trace)});
    log.push_back(ParamPoint{n, current.alpha, current.beta});
    if (n == epochs) result.final_trace = std::move(trace);
  }
  result.final_trace.params_log = std::move(log);
  result.final_params = current;
  return result;
}

namespace {

// Index of the last record with round <= t, or -1.
std::ptrdiff_t last_record_at(const TrajectoryBuffer& buffer, std::int64_t t) {
  std::ptrdiff_t r = static_cast<std::ptrdiff_t>(buffer.size()) - 1;
  while (r >= 0 && buffer[static_cast<std::size_t>(r)].round > t) --r;
  return r;
}

}  // namespace

double online_surrogate(const TrajectoryBuffer& buffer, std::int64_t t,
                        std::int64_t horizon, Objective objective,
                        std::span<const double> targets, double threshold,
                        const TrainableParams& params) {
  if (t < 1 || t > horizon) throw std::invalid_argument("online_surrogate: t outside [1, T]");
  check_targets(buffer, targets);
  const std::ptrdiff_t last = last_record_at(buffer, t);
  if (last < 0) return 0.0;
  RoundEvaluator eval;
  const Settings s = settings_from(params, threshold);
  double observed = 0.0;
  double current = 0.0;
  for (std::ptrdiff_t r = 0; r <= last; ++r) {
    current = eval.evaluate(objective, buffer[static_cast<std::size_t>(r)], targets, s).value;
    observed += current;
  }
  const double T = static_cast<double>(horizon);
  return (observed + static_cast<double>(horizon - t) * current) / T;
}

TrainableParams online_train_step(const TrajectoryBuffer& buffer, std::int64_t t,
                                  std::int64_t horizon, Objective objective,
                                  std::span<const double> targets, double threshold,
                                  const TrainableParams& params) {
  if (t < 1 || t > horizon) throw std::invalid_argument("online_train_step: t outside [1, T]");
  check_targets(buffer, targets);
  const std::ptrdiff_t last = last_record_at(buffer, t);
  TrainableParams next = params;
  if (last < 0) return next;
  const std::ptrdiff_t first =
      std::max<std::ptrdiff_t>(0, last + 1 - static_cast<std::ptrdiff_t>(params.batch_size));
  RoundEvaluator eval;
  const Settings s = settings_from(params, threshold);
  double ga = 0.0;
  double gb = 0.0;
  for (std::ptrdiff_t r = first; r <= last; ++r) {
    const RoundTerms terms = eval.evaluate(objective, buffer[static_cast<std::size_t>(r)],
                                           targets, s);
    ga += terms.d_alpha;
    gb += terms.d_beta;
  }
  const double weight = static_cast<double>(horizon - t) /
                        (static_cast<double>(horizon) * static_cast<double>(last - first + 1));
  if (objective != Objective::Sampling) {
    next.alpha = std::max(0.0, params.alpha + params.learning_rate * weight * ga);
  }
  if (objective != Objective::Identification) {
    next.beta = std::max(0.0, params.beta + params.learning_rate * weight * gb);
  }
  return next;
}

RunTrace online_train(const BanditInstance& instance, std::int64_t horizon,
                      const TrainableParams& params, std::uint64_t seed,
                      const OnlineOptions& options) {
  params.validate();
  AlgorithmSpec spec;
  spec.name = Algorithm::DGAI;
  spec.delta = options.delta;
  spec.hyper.alpha = params.alpha;
  spec.hyper.beta = params.beta;
  spec.hyper.delta_policy = options.delta_policy;

  TrajectoryBuffer buffer;
  std::vector<ParamPoint> log;
  std::vector<double> estimates(instance.arms());
  TrainableParams current = params;
  EpisodeOptions eo;
  eo.buffer = &buffer;
  eo.log_policy = options.log_policy;
  eo.after_round = [&](std::int64_t t, const LinearState& state, const TrajectoryBuffer* buf,
                       AlgorithmHyper& hyper) {
    if (t % params.batch_size != 0 || t >= horizon) return;
    for (std::size_t i = 0; i < estimates.size(); ++i) estimates[i] = state.ridge_mean(i);
    const double xi = instance.threshold();
    const TrainableParams s =
        online_train_step(*buf, t, horizon, Objective::Sampling, estimates, xi, current);
    const TrainableParams a =
        online_train_step(*buf, t, horizon, Objective::Identification, estimates, xi, current);
    current.beta = s.beta;
    current.alpha = a.alpha;
    guard(current.alpha, current.beta, "online_train", t);
    hyper.alpha = current.alpha;
    hyper.beta = current.beta;
    log.push_back(ParamPoint{t, current.alpha, current.beta});
  };
  RunTrace trace = run_gai_episode(spec, instance, horizon, seed, eo);
  trace.params_log = std::move(log);
  return trace;
}

RunTrace mab_threshold_train(const BanditInstance& instance, std::int64_t horizon,
                             const TrainableParams& params, std::uint64_t seed,
                             const OnlineOptions& options) {
  params.validate();
  const std::size_t k = instance.arms();
  if (horizon < static_cast<std::int64_t>(k)) {
    throw std::invalid_argument("horizon must be >= number of arms");
  }
  const double delta = options.delta_policy.value_or(options.delta);
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const double xi = instance.threshold();

  LinearState state = LinearState::for_instance(instance);
  Rng policy_rng = make_rng(seed, 0);
  std::vector<Rng> arm_rngs;
  for (std::size_t i = 0; i < k; ++i) arm_rngs.push_back(make_rng(seed, i + 1));

  RunTrace trace;
  trace.horizon = horizon;
  trace.ledger = IdentificationLedger(k);
  trace.pulls.reserve(static_cast<std::size_t>(std::min<std::int64_t>(horizon, 1 << 22)));

  std::vector<std::uint32_t> arms(k);
  for (std::size_t i = 0; i < k; ++i) arms[i] = static_cast<std::uint32_t>(i);
  std::vector<double> means(k), norms(k), screen(k);
  TrajectoryBuffer buffer;
  IndexSnapshot snap;
  TrainableParams current = params;

  auto fill = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      means[i] = state.ridge_mean(i);
      norms[i] = state.feature_norm(i);
    }
  };
  auto pull = [&](std::int64_t t, std::size_t arm) {
    const RewardSample y = sample_reward(instance, arm, arm_rngs[arm], t);
    state.update(arm, y.value);
    trace.pulls.push_back(Pull{t, static_cast<std::uint32_t>(arm), y.value});
    buffer.set_last_outcome(static_cast<std::uint32_t>(arm), y.value);
  };

  std::int64_t t = 0;
  for (std::size_t i = 0; i < k; ++i) {
    ++t;
    fill();
    buffer.append(t, 0.0, false, false, arms, means, norms, 0, 0.0);
    pull(t, i);
    if (options.log_policy) {
      std::vector<double> mass(k, 0.0);
      mass[i] = 1.0;
      trace.policy_log.push_back(std::move(mass));
    }
  }
  while (t < horizon) {
    ++t;
    fill();
    compute_index(means, norms, current.beta, snap);
    const double gamma = coldness(snap, delta);
    for (std::size_t i = 0; i < k; ++i) {
      screen[i] = sigmoid((means[i] - current.alpha * norms[i] - xi) * current.sharpness_M);
    }
    std::vector<double> p = combined_policy(snap.index, screen, gamma);
    buffer.append(t, gamma, true, snap.coldness_floored, arms, means, norms, 0, 0.0);
    const std::size_t arm = sample_arm(p, policy_rng);
    pull(t, arm);
    if (options.log_policy) trace.policy_log.push_back(std::move(p));

    if (t % current.batch_size == 0 && t < horizon) {
      fill();
      current = online_train_step(buffer, t, horizon, Objective::Combined, means, xi, current);
      guard(current.alpha, current.beta, "mab_threshold_train", t);
      trace.params_log.push_back(ParamPoint{t, current.alpha, current.beta});
    }
  }
  trace.ledger.close(t);
  return trace;
}

}  // namespace gai
