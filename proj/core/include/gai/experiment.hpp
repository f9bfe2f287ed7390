#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gai/algorithms.hpp"
#include "gai/training.hpp"

namespace gai {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What a run label in `algorithms` executes.
enum class RunnerKind {
  Episode,          // HDoC, LUCB-G, APT-G, TT-TS with fixed hyper-parameters
  SoftUCBGOffline,  // SoftUCB-G, beta trained offline
  DGAIOffline,
  DGAIOnline,
  MabThreshold,     // mab_threshold_train, no identification
  PlainUCB,         // HDoC sampling, no identification
};

struct RunnerSpec {
  std::string label;
  RunnerKind kind = RunnerKind::Episode;
  Algorithm algorithm = Algorithm::HDoC;
};

/// Labels: HDoC, LUCB-G, APT-G, TT-TS, SoftUCB-G, DGAI-offline, DGAI-online,
/// MAB-threshold, UCB.
std::optional<RunnerSpec> parse_runner(std::string_view label);
std::vector<std::string> runner_labels();

struct ExperimentConfig {
  std::string dataset = "SynthSmall";  // preset name
  std::vector<RunnerSpec> algorithms;
  std::optional<std::int64_t> horizon;
  int epochs = 50;
  int repetitions = 10;
  std::uint64_t base_seed = 1;
  double scale = 1.0;
  std::filesystem::path output_dir = "results";
  bool emit_policy_log = false;
  int jobs = 1;
  int smooth = 0;  // trailing moving-average window for plot series; 0 = off
  // Fixed arm set for every repetition; otherwise repetition r draws its arms
  // with seed base_seed + r.
  std::optional<std::uint64_t> instance_seed;

  double delta = 0.1;
  AlgorithmHyper hyper;    // baselines' switches and delta_policy
  TrainableParams train;   // alpha0/beta0 and optimizer settings

  std::optional<std::filesystem::path> csv_path;
  std::string csv_item_column = "item";
  std::string csv_rating_column = "rating";
  double csv_percentile = 95.0;
  std::optional<std::size_t> csv_max_arms;

  void validate() const;
};

/// Default output directory: $GAI_BENCH_OUT_DIR or "results".
std::filesystem::path default_output_dir();

/// Applies one key=value setting; throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Flat "key = value" file; '#' starts a comment.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

std::vector<std::string> config_keys();

struct RunRow {
  std::size_t run_id = 0;
  std::string algorithm;
  std::string dataset;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  bool failed = false;
  std::string error;
  double exploit_score = 0.0;
  double cum_reward = 0.0;
  std::int64_t tau_stop = 0;
  std::size_t n_good_output = 0;
  std::size_t n_false_good = 0;
  bool identifies = true;  // false for reward-only runners
  bool first_output_bad = false;
  bool pac_fail = false;  // (1, delta)-PAC failure event
  std::vector<std::vector<double>> policy_log;  // only with emit_policy_log
};

struct AggregateRow {
  std::string algorithm;
  std::string dataset;
  std::size_t n_runs = 0;
  std::size_t n_failed = 0;
  double exploit_mean = 0.0, exploit_sd = 0.0;
  double cum_reward_mean = 0.0, cum_reward_sd = 0.0;
  double tau_stop_mean = 0.0, tau_stop_sd = 0.0;
  double false_good_rate = 0.0;  // runs with any bad arm output as Good
  double pac_error = 0.0;        // lambda = 1 PAC failure rate
};

struct SeriesPoint {
  std::string algorithm;
  std::string metric;
  std::int64_t epoch_or_round = 0;
  double value = 0.0;
};

// Per-figure series, already averaged over successful repetitions.
struct SeriesBundle {
  std::vector<SeriesPoint> exploit;     // exploit score vs epoch / round
  std::vector<SeriesPoint> params;      // alpha and beta vs epoch / round
  std::vector<SeriesPoint> radius;      // best arm's identification radius vs round
  std::vector<SeriesPoint> cum_reward;  // cumulative reward vs round
};

struct ExperimentResult {
  std::string dataset_label;
  std::int64_t arms = 0;
  std::int64_t horizon = 0;
  std::vector<RunRow> runs;
  std::vector<AggregateRow> aggregate;
  SeriesBundle series;
};

/// Runs every (algorithm, repetition) pair with seed base_seed + r, up to
/// `jobs` at a time. Failed runs become rows with failed = true. Does not
/// touch the filesystem except to read a CSV dataset.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Mean / sample SD over successful runs, one row per algorithm in config order.
std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs,
                                         const std::vector<RunnerSpec>& order,
                                         const std::string& dataset);

void write_runs_csv(const std::vector<RunRow>& runs, std::ostream& out);
void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
void write_series_csv(const std::vector<SeriesPoint>& points, std::ostream& out);

/// Trailing moving average of width w within each (algorithm, metric) series.
std::vector<SeriesPoint> smooth_series(const std::vector<SeriesPoint>& points, int window);

/// Writes fig1_exploit.csv, fig2_params.csv, fig3_radius.csv, fig4_cum_reward.csv.
/// Empty series are skipped; one warning line per skipped file is returned.
std::vector<std::string> emit_plot_series(const ExperimentResult& result,
                                          const std::filesystem::path& dir, int smooth);

/// runs.csv, aggregate.csv, the plot series and (if requested) one
/// policy/run_<id>.csv per run under config.output_dir.
std::vector<std::string> write_results(const ExperimentResult& result,
                                       const ExperimentConfig& config);

}  // namespace gai
