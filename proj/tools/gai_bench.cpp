#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gai/csv.hpp"
#include "gai/datasets.hpp"
#include "gai/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitAllFailed = 3;

struct RunArgs {
  std::optional<std::string> config_file;
  std::optional<std::string> dataset;
  std::optional<std::string> algorithms;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::optional<int> epochs;
  std::optional<std::int64_t> horizon;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<int> smooth;
  std::vector<std::string> sets;
  bool quiet = false;
};

// Precedence: defaults < config file < --set < dedicated flags.
gai::ExperimentConfig build_config(const RunArgs& a) {
  gai::ExperimentConfig c;
  c.output_dir = gai::default_output_dir();
  if (a.config_file) gai::apply_config_file(c, *a.config_file);
  for (const std::string& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw gai::ConfigError("--set expects key=value, got '" + kv + "'");
    gai::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.dataset) gai::apply_setting(c, "dataset", *a.dataset);
  if (a.algorithms) gai::apply_setting(c, "algorithms", *a.algorithms);
  if (a.reps) c.repetitions = *a.reps;
  if (a.seed) c.base_seed = *a.seed;
  if (a.scale) c.scale = *a.scale;
  if (a.epochs) c.epochs = *a.epochs;
  if (a.horizon) c.horizon = *a.horizon;
  if (a.out) c.output_dir = *a.out;
  if (a.jobs) c.jobs = *a.jobs;
  if (a.smooth) c.smooth = *a.smooth;
  return c;
}

int cmd_run(const RunArgs& args) {
  gai::ExperimentConfig config;
  gai::ExperimentResult result;
  try {
    config = build_config(args);
    result = gai::run_experiment(config);
  } catch (const gai::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    // Dataset loading problems are configuration problems too.
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  for (const std::string& w : gai::write_results(result, config)) std::cerr << w << "\n";

  if (!args.quiet) {
    std::cout << "dataset " << result.dataset_label << " K=" << result.arms
              << " T=" << result.horizon << " -> " << config.output_dir.string() << "\n";
    for (const gai::AggregateRow& a : result.aggregate) {
      std::cout << "  " << a.algorithm << ": exploit " << gai::format_double(a.exploit_mean)
                << " (sd " << gai::format_double(a.exploit_sd) << "), cum_reward "
                << gai::format_double(a.cum_reward_mean) << ", failed " << a.n_failed << "/"
                << a.n_runs << "\n";
    }
  }
  std::size_t failed = 0;
  for (const gai::RunRow& r : result.runs) failed += r.failed ? 1 : 0;
  return failed == result.runs.size() ? kExitAllFailed : 0;
}

int cmd_presets(double scale) {
  gai::CsvWriter w(std::cout);
  w.row({"name", "arms", "horizon", "threshold"});
  for (gai::PresetName name : gai::all_presets()) {
    const gai::DatasetPreset p = gai::scaled_preset(gai::preset(name), scale);
    w.row({gai::to_string(name), p.arms_text, p.horizon_text, p.threshold_text});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Good-arm identification benchmark harness"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run = app.add_subcommand("run", "Run an algorithm x repetition sweep and write CSVs");
  run->add_option("--config", args.config_file, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--dataset", args.dataset, "Preset name (see `presets`)");
  run->add_option("--algo", args.algorithms, "Comma-separated algorithm labels");
  run->add_option("--reps", args.reps, "Repetitions per algorithm");
  run->add_option("--seed", args.seed, "Base seed; repetition r uses seed + r");
  run->add_option("--scale", args.scale, "Shrink arms and horizon by this factor, in (0, 1]");
  run->add_option("--epochs", args.epochs, "Offline training epochs");
  run->add_option("--horizon", args.horizon, "Override the preset horizon T");
  run->add_option("--out", args.out, "Output directory (default $GAI_BENCH_OUT_DIR or results)");
  run->add_option("--jobs", args.jobs, "Concurrent runs");
  run->add_option("--smooth", args.smooth, "Trailing moving-average window for plot series");
  run->add_option("--set", args.sets, "Any config key as key=value (repeatable)");
  run->add_flag("-q,--quiet", args.quiet, "No summary on stdout");

  double preset_scale = 1.0;
  auto* presets = app.add_subcommand("presets", "Print the dataset presets as CSV");
  presets->add_option("--scale", preset_scale, "Apply the desk-scale shrink")
      ->check(CLI::Range(0.0, 1.0));

  auto* list = app.add_subcommand("list", "Print algorithm labels and config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run) return cmd_run(args);
  if (*presets) {
    try {
      return cmd_presets(preset_scale);
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  if (*list) {
    std::cout << "algorithms:";
    for (const auto& l : gai::runner_labels()) std::cout << " " << l;
    std::cout << "\nconfig keys:";
    for (const auto& k : gai::config_keys()) std::cout << " " << k;
    std::cout << "\n";
    return 0;
  }
  return 0;
}
