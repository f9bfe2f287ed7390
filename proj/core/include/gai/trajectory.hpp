#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gai {

/// One round of a recorded trajectory, as seen by the training objectives:
/// the arms that were still active before the pull together with their ridge
/// means and ||x_i||_{V_t^-1}, and the coldness the policy used.
struct RoundView {
  std::int64_t round = 0;
  double coldness = 0.0;
  bool policy_round = false;      // the pulled arm was drawn from the softmax policy
  bool coldness_floored = false;  // coldness denominator hit its floor
  std::span<const std::uint32_t> arms;
  std::span<const double> means;
  std::span<const double> norms;
  std::uint32_t pulled = 0;
  double reward = 0.0;
};

/// Append-only per-epoch store of RoundViews in flat arrays.
class TrajectoryBuffer {
 public:
  void begin_epoch(int epoch);
  void clear();

  void append(std::int64_t round, double coldness, bool policy_round,
              bool coldness_floored, std::span<const std::uint32_t> arms,
              std::span<const double> means, std::span<const double> norms,
              std::uint32_t pulled, double reward);

  // Sets the pulled arm and reward of the most recent record.
  void set_last_outcome(std::uint32_t pulled, double reward);

  std::size_t size() const { return rounds_.size(); }
  bool empty() const { return rounds_.empty(); }
  RoundView operator[](std::size_t r) const;
  RoundView back() const { return (*this)[size() - 1]; }
  int epoch() const { return epoch_; }

 private:
  struct Record {
    std::int64_t round;
    double coldness;
    bool policy_round;
    bool coldness_floored;
    std::size_t offset;
    std::size_t count;
    std::uint32_t pulled;
    double reward;
  };

  int epoch_ = 0;
  std::vector<Record> rounds_;
  std::vector<std::uint32_t> arms_;
  std::vector<double> means_;
  std::vector<double> norms_;
};

}  // namespace gai
