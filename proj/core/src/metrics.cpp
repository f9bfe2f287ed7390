#include "gai/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace gai {

double exploit_score(const RunTrace& trace, const BanditInstance& instance,
                     std::int64_t horizon) {
  double score = 0.0;
  for (const GoodOutput& g : trace.ledger.outputs()) {
    const double remaining = static_cast<double>(horizon - g.round);
    score += remaining * (instance.mean(g.arm) - instance.threshold());
  }
  return score;
}

double exploit_score(const RunTrace& trace, const BanditInstance& instance) {
  return exploit_score(trace, instance, trace.horizon);
}

double cumulative_reward(const RunTrace& trace) {
  double total = 0.0;
  for (const Pull& p : trace.pulls) total += p.reward;
  return total;
}

std::size_t false_good_count(const RunTrace& trace, const BanditInstance& instance) {
  std::size_t n = 0;
  for (const GoodOutput& g : trace.ledger.outputs()) n += instance.is_good(g.arm) ? 0 : 1;
  return n;
}

double false_good_rate(std::span<const RunTrace> traces, const BanditInstance& instance) {
  if (traces.empty()) throw std::invalid_argument("false_good_rate: no traces");
  std::size_t bad = 0;
  for (const RunTrace& t : traces) bad += false_good_count(t, instance) > 0 ? 1 : 0;
  return static_cast<double>(bad) / static_cast<double>(traces.size());
}

PacErrorRates pac_error(std::span<const RunTrace> traces, const BanditInstance& instance,
                        std::size_t lambda) {
  if (traces.empty()) throw std::invalid_argument("pac_error: no traces");
  if (lambda == 0) throw std::invalid_argument("pac_error: lambda must be >= 1");
  const double n = static_cast<double>(traces.size());
  PacErrorRates rates;
  std::size_t failures = 0;
  if (instance.good_count() >= lambda) {
    for (const RunTrace& t : traces) {
      const auto& out = t.ledger.outputs();
      bool fail = out.size() < lambda;
      for (std::size_t l = 0; !fail && l < lambda; ++l) fail = !instance.is_good(out[l].arm);
      failures += fail ? 1 : 0;
    }
    rates.bad_as_good = static_cast<double>(failures) / n;
  } else {
    for (const RunTrace& t : traces) failures += t.ledger.outputs().size() >= lambda ? 1 : 0;
    rates.overcount = static_cast<double>(failures) / n;
  }
  return rates;
}

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  s.max = values.back();
  return s;
}

std::int64_t stop_round(const RunTrace& trace) {
  if (trace.ledger.censored() || !trace.ledger.stop_round()) return trace.horizon;
  return std::min(*trace.ledger.stop_round(), trace.horizon);
}

StoppingStats stopping_stats(std::span<const RunTrace> traces) {
  StoppingStats stats;
  std::size_t most = 0;
  for (const RunTrace& t : traces) most = std::max(most, t.ledger.outputs().size());
  stats.tau.resize(most);
  for (std::size_t l = 0; l < most; ++l) {
    std::vector<double> rounds;
    for (const RunTrace& t : traces) {
      const auto& out = t.ledger.outputs();
      if (out.size() > l) rounds.push_back(static_cast<double>(out[l].round));
    }
    if (!rounds.empty()) stats.tau[l] = summarize(std::move(rounds));
  }
  std::vector<double> stops;
  for (const RunTrace& t : traces) {
    stops.push_back(static_cast<double>(stop_round(t)));
    stats.censored += t.ledger.censored() ? 1 : 0;
  }
  stats.tau_stop = summarize(std::move(stops));
  return stats;
}

}  // namespace gai
