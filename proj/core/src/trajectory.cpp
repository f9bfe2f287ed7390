#include "gai/trajectory.hpp"

#include <stdexcept>

#include "gai/run_trace.hpp"

namespace gai {

void TrajectoryBuffer::begin_epoch(int epoch) {
  clear();
  epoch_ = epoch;
}

void TrajectoryBuffer::clear() {
  rounds_.clear();
  arms_.clear();
  means_.clear();
  norms_.clear();
}

void TrajectoryBuffer::append(std::int64_t round, double coldness, bool policy_round,
                              bool coldness_floored,
                              std::span<const std::uint32_t> arms,
                              std::span<const double> means,
                              std::span<const double> norms, std::uint32_t pulled,
                              double reward) {
  if (arms.size() != means.size() || arms.size() != norms.size()) {
    throw std::invalid_argument("TrajectoryBuffer::append: ragged round record");
  }
  if (!rounds_.empty() && round < rounds_.back().round) {
    throw std::invalid_argument("TrajectoryBuffer::append: rounds must not go back");
  }
  rounds_.push_back(Record{round, coldness, policy_round, coldness_floored,
                           arms_.size(), arms.size(), pulled, reward});
  arms_.insert(arms_.end(), arms.begin(), arms.end());
  means_.insert(means_.end(), means.begin(), means.end());
  norms_.insert(norms_.end(), norms.begin(), norms.end());
}

void TrajectoryBuffer::set_last_outcome(std::uint32_t pulled, double reward) {
  if (rounds_.empty()) throw std::logic_error("TrajectoryBuffer: no record to complete");
  rounds_.back().pulled = pulled;
  rounds_.back().reward = reward;
}

RoundView TrajectoryBuffer::operator[](std::size_t r) const {
  const Record& rec = rounds_.at(r);
  RoundView v;
  v.round = rec.round;
  v.coldness = rec.coldness;
  v.policy_round = rec.policy_round;
  v.coldness_floored = rec.coldness_floored;
  v.arms = std::span<const std::uint32_t>(arms_.data() + rec.offset, rec.count);
  v.means = std::span<const double>(means_.data() + rec.offset, rec.count);
  v.norms = std::span<const double>(norms_.data() + rec.offset, rec.count);
  v.pulled = rec.pulled;
  v.reward = rec.reward;
  return v;
}

// IdentificationLedger

void IdentificationLedger::check_active(std::size_t arm) const {
  if (status_.at(arm).status != ArmStatus::Active) {
    throw std::logic_error("arm already decided");
  }
}

void IdentificationLedger::mark_good(std::size_t arm, std::int64_t round) {
  check_active(arm);
  if (!outputs_.empty() && round < outputs_.back().round) {
    throw std::logic_error("good outputs must be recorded in round order");
  }
  status_[arm] = ArmDecision{ArmStatus::Good, round};
  outputs_.push_back(GoodOutput{arm, round});
  if (active_count() == 0) stop_round_ = round;
}

void IdentificationLedger::mark_bad(std::size_t arm, std::int64_t round) {
  check_active(arm);
  status_[arm] = ArmDecision{ArmStatus::Bad, round};
  if (active_count() == 0) stop_round_ = round;
}

void IdentificationLedger::close(std::int64_t round) {
  bool any = false;
  for (auto& d : status_) {
    if (d.status == ArmStatus::Active) {
      d.status = ArmStatus::Undecided;
      any = true;
    }
  }
  if (any) {
    censored_ = true;
    stop_round_ = round;
  } else if (!stop_round_) {
    stop_round_ = round;
  }
}

std::size_t IdentificationLedger::active_count() const {
  std::size_t n = 0;
  for (const auto& d : status_) n += d.status == ArmStatus::Active ? 1 : 0;
  return n;
}

}  // namespace gai
