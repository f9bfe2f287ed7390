#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace gai {

enum class ArmStatus { Active, Good, Bad, Undecided };

struct ArmDecision {
  ArmStatus status = ArmStatus::Active;
  std::int64_t round = 0;  // round of the decision; 0 while active/undecided
};

struct GoodOutput {
  std::size_t arm = 0;
  std::int64_t round = 0;
};

/// Per-arm identification state of one episode. Decisions are final.
class IdentificationLedger {
 public:
  IdentificationLedger() = default;
  explicit IdentificationLedger(std::size_t arms) : status_(arms) {}

  std::size_t arms() const { return status_.size(); }
  const ArmDecision& decision(std::size_t arm) const { return status_.at(arm); }
  bool active(std::size_t arm) const { return status_.at(arm).status == ArmStatus::Active; }

  // Throws std::logic_error if the arm was already decided.
  void mark_good(std::size_t arm, std::int64_t round);
  void mark_bad(std::size_t arm, std::int64_t round);
  // Marks every still-active arm Undecided and records the stop round.
  void close(std::int64_t round);

  const std::vector<GoodOutput>& outputs() const { return outputs_; }
  std::optional<std::int64_t> stop_round() const { return stop_round_; }
  // True when the episode hit the horizon with arms still undecided.
  bool censored() const { return censored_; }
  std::size_t active_count() const;

 private:
  void check_active(std::size_t arm) const;

  std::vector<ArmDecision> status_;
  std::vector<GoodOutput> outputs_;
  std::optional<std::int64_t> stop_round_;
  bool censored_ = false;
};

struct Pull {
  std::int64_t round = 0;
  std::uint32_t arm = 0;
  double reward = 0.0;
};

struct ParamPoint {
  std::int64_t step = 0;  // epoch (offline) or round (online)
  double alpha = 0.0;
  double beta = 0.0;
};

/// Full record of one episode.
struct RunTrace {
  std::int64_t horizon = 0;
  std::vector<Pull> pulls;
  IdentificationLedger ledger;
  // Per-round policy over all K arms (0 for removed arms); empty unless requested.
  std::vector<std::vector<double>> policy_log;
  std::vector<ParamPoint> params_log;
};

}  // namespace gai
