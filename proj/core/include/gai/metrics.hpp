#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gai/bandit_instance.hpp"
#include "gai/run_trace.hpp"

namespace gai {

/// sum over Good outputs of (T - t_i)(mu_i - xi) with true means. Bad and
/// undecided arms contribute 0; wrong Good outputs contribute their negative term.
double exploit_score(const RunTrace& trace, const BanditInstance& instance,
                     std::int64_t horizon);
double exploit_score(const RunTrace& trace, const BanditInstance& instance);

double cumulative_reward(const RunTrace& trace);

/// Number of Good outputs whose true mean is below the threshold.
std::size_t false_good_count(const RunTrace& trace, const BanditInstance& instance);

/// Fraction of traces that output at least one bad arm as Good.
double false_good_rate(std::span<const RunTrace> traces, const BanditInstance& instance);

struct PacErrorRates {
  // Set when the instance has >= lambda good arms: fraction of traces with fewer
  // than lambda outputs or a bad arm among the first lambda.
  std::optional<double> bad_as_good;
  // Set when it has fewer: fraction of traces claiming >= lambda good arms.
  std::optional<double> overcount;
};

PacErrorRates pac_error(std::span<const RunTrace> traces, const BanditInstance& instance,
                        std::size_t lambda);

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct StoppingStats {
  // tau[l - 1] summarizes the round of the l-th Good output over the traces
  // that reached l outputs; absent when none did.
  std::vector<std::optional<SummaryStats>> tau;
  SummaryStats tau_stop;  // censored traces report T
  std::size_t censored = 0;
};

/// tau_stop of one trace: its stop round, or T when censored.
std::int64_t stop_round(const RunTrace& trace);

StoppingStats stopping_stats(std::span<const RunTrace> traces);

}  // namespace gai
