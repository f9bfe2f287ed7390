#include "gai/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "gai/csv.hpp"
#include "gai/datasets.hpp"
#include "gai/identification.hpp"
#include "gai/metrics.hpp"

namespace gai {

namespace {

constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

struct RunnerEntry {
  const char* label;
  RunnerKind kind;
  Algorithm algorithm;
};

constexpr RunnerEntry kRunners[] = {
    {"HDoC", RunnerKind::Episode, Algorithm::HDoC},
    {"LUCB-G", RunnerKind::Episode, Algorithm::LUCBG},
    {"APT-G", RunnerKind::Episode, Algorithm::APTG},
    {"TT-TS", RunnerKind::Episode, Algorithm::TTTS},
    {"SoftUCB-G", RunnerKind::SoftUCBGOffline, Algorithm::SoftUCBG},
    {"DGAI-offline", RunnerKind::DGAIOffline, Algorithm::DGAI},
    {"DGAI-online", RunnerKind::DGAIOnline, Algorithm::DGAI},
    {"MAB-threshold", RunnerKind::MabThreshold, Algorithm::DGAI},
    {"UCB", RunnerKind::PlainUCB, Algorithm::HDoC},
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view raw) {
  const std::string v = trim(raw);
  T out{};
  const char* end = v.data() + v.size();
  std::from_chars_result r{};
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for double is missing from libstdc++ 11.
    char* stop = nullptr;
    out = std::strtod(v.c_str(), &stop);
    r.ptr = stop;
    r.ec = (stop == v.c_str() || !std::isfinite(out)) ? std::errc::invalid_argument : std::errc{};
  } else if (v.find_first_of(".eE") != std::string::npos) {
    // Integers written as 1e5.
    char* stop = nullptr;
    const double d = std::strtod(v.c_str(), &stop);
    r.ptr = stop;
    const bool integral = std::isfinite(d) && d == std::floor(d) &&
                          d >= static_cast<double>(std::numeric_limits<T>::min()) &&
                          d <= static_cast<double>(std::numeric_limits<T>::max());
    r.ec = (stop == v.c_str() || !integral) ? std::errc::invalid_argument : std::errc{};
    out = static_cast<T>(d);
  } else {
    r = std::from_chars(v.data(), end, out);
  }
  if (r.ec != std::errc{} || r.ptr != end || v.empty()) {
    throw ConfigError("bad value '" + v + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("bad boolean '" + v + "' for " + std::string(key));
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"dataset", [](auto& c, auto, auto v) { c.dataset = trim(v); }},
      {"algorithms",
       [](auto& c, auto, auto v) {
         c.algorithms.clear();
         std::string list(v);
         std::stringstream ss(list);
         std::string item;
         while (std::getline(ss, item, ',')) {
           item = trim(item);
           if (item.empty()) continue;
           const auto spec = parse_runner(item);
           if (!spec) throw ConfigError("unknown algorithm '" + item + "'");
           c.algorithms.push_back(*spec);
         }
       }},
      {"horizon",
       [](auto& c, auto k, auto v) { c.horizon = parse_number<std::int64_t>(k, v); }},
      {"epochs", [](auto& c, auto k, auto v) { c.epochs = parse_number<int>(k, v); }},
      {"repetitions",
       [](auto& c, auto k, auto v) { c.repetitions = parse_number<int>(k, v); }},
      {"base_seed",
       [](auto& c, auto k, auto v) { c.base_seed = parse_number<std::uint64_t>(k, v); }},
      {"scale", [](auto& c, auto k, auto v) { c.scale = parse_number<double>(k, v); }},
      {"output_dir", [](auto& c, auto, auto v) { c.output_dir = trim(v); }},
      {"emit_policy_log",
       [](auto& c, auto k, auto v) { c.emit_policy_log = parse_bool(k, v); }},
      {"jobs", [](auto& c, auto k, auto v) { c.jobs = parse_number<int>(k, v); }},
      {"smooth", [](auto& c, auto k, auto v) { c.smooth = parse_number<int>(k, v); }},
      {"instance_seed",
       [](auto& c, auto k, auto v) { c.instance_seed = parse_number<std::uint64_t>(k, v); }},
      {"delta", [](auto& c, auto k, auto v) { c.delta = parse_number<double>(k, v); }},
      {"delta_policy",
       [](auto& c, auto k, auto v) { c.hyper.delta_policy = parse_number<double>(k, v); }},
      {"apt_argmin", [](auto& c, auto k, auto v) { c.hyper.apt_argmin = parse_bool(k, v); }},
      {"lucb_include_t",
       [](auto& c, auto k, auto v) { c.hyper.lucb_include_t = parse_bool(k, v); }},
      {"ts_resample_prob",
       [](auto& c, auto k, auto v) { c.hyper.ts_resample_prob = parse_number<double>(k, v); }},
      {"alpha0", [](auto& c, auto k, auto v) { c.train.alpha = parse_number<double>(k, v); }},
      {"beta0", [](auto& c, auto k, auto v) { c.train.beta = parse_number<double>(k, v); }},
      {"learning_rate",
       [](auto& c, auto k, auto v) { c.train.learning_rate = parse_number<double>(k, v); }},
      {"eta1", [](auto& c, auto k, auto v) { c.train.eta1 = parse_number<double>(k, v); }},
      {"eta2", [](auto& c, auto k, auto v) { c.train.eta2 = parse_number<double>(k, v); }},
      {"sharpness_M",
       [](auto& c, auto k, auto v) { c.train.sharpness_M = parse_number<double>(k, v); }},
      {"batch_size",
       [](auto& c, auto k, auto v) { c.train.batch_size = parse_number<std::int64_t>(k, v); }},
      {"csv_path", [](auto& c, auto, auto v) { c.csv_path = trim(v); }},
      {"csv_item_column", [](auto& c, auto, auto v) { c.csv_item_column = trim(v); }},
      {"csv_rating_column", [](auto& c, auto, auto v) { c.csv_rating_column = trim(v); }},
      {"csv_percentile",
       [](auto& c, auto k, auto v) { c.csv_percentile = parse_number<double>(k, v); }},
      {"csv_max_arms",
       [](auto& c, auto k, auto v) { c.csv_max_arms = parse_number<std::size_t>(k, v); }},
  };
  return table;
}

}  // namespace

std::optional<RunnerSpec> parse_runner(std::string_view label) {
  for (const RunnerEntry& e : kRunners) {
    if (label == e.label) return RunnerSpec{e.label, e.kind, e.algorithm};
  }
  return std::nullopt;
}

std::vector<std::string> runner_labels() {
  std::vector<std::string> out;
  for (const RunnerEntry& e : kRunners) out.emplace_back(e.label);
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, _] : setters()) out.push_back(k);
  return out;
}

std::filesystem::path default_output_dir() {
  const char* env = std::getenv("GAI_BENCH_OUT_DIR");
  if (env && *env) return env;
  return "results";
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const std::string k = trim(key);
  const auto it = setters().find(k);
  if (it == setters().end()) throw ConfigError("unknown config key '" + k + "'");
  it->second(config, k, value);
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": expected key = value");
    }
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ConfigError("no algorithms given");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(scale > 0.0 && scale <= 1.0)) throw ConfigError("scale must lie in (0, 1]");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (smooth < 0) throw ConfigError("smooth must be >= 0");
  if (horizon && *horizon < 1) throw ConfigError("horizon must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (hyper.delta_policy && !(*hyper.delta_policy > 0.0 && *hyper.delta_policy < 1.0)) {
    throw ConfigError("delta_policy must lie in (0, 1)");
  }
  if (!(hyper.ts_resample_prob >= 0.0 && hyper.ts_resample_prob <= 1.0)) {
    throw ConfigError("ts_resample_prob must lie in [0, 1]");
  }
  if (!(csv_percentile >= 0.0 && csv_percentile <= 100.0)) {
    throw ConfigError("csv_percentile must lie in [0, 100]");
  }
  try {
    train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto p = parse_preset(dataset);
  if (!p) throw ConfigError("unknown dataset '" + dataset + "'");
  if (preset(*p).source == DatasetSource::CsvPath && !csv_path) {
    throw ConfigError(dataset + " needs csv_path");
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Problem {
  DatasetPreset preset;
  std::int64_t horizon = 0;
  std::optional<BanditInstance> fixed;  // CSV datasets and instance_seed
};

Problem make_problem(const ExperimentConfig& c) {
  Problem p;
  p.preset = scaled_preset(preset(c.dataset), c.scale);
  p.horizon = c.horizon.value_or(p.preset.horizon);
  if (p.preset.source == DatasetSource::CsvPath) {
    RatingsCsvOptions o;
    o.item_column = c.csv_item_column;
    o.rating_column = c.csv_rating_column;
    o.threshold_percentile = c.csv_percentile;
    o.max_arms = c.csv_max_arms;
    if (!o.max_arms && c.scale < 1.0) o.max_arms = static_cast<std::size_t>(p.preset.arms);
    p.fixed = load_ratings_csv(*c.csv_path, o);
  } else if (c.instance_seed) {
    p.fixed = make_preset_instance(p.preset, *c.instance_seed);
  }
  return p;
}

std::vector<std::int64_t> round_grid(std::int64_t horizon) {
  std::vector<std::int64_t> grid;
  constexpr std::int64_t points = 100;
  for (std::int64_t j = 1; j <= points; ++j) {
    const std::int64_t g = (j * horizon + points - 1) / points;
    if (g >= 1 && (grid.empty() || g > grid.back())) grid.push_back(g);
  }
  return grid;
}

struct Curve {
  std::string metric;
  std::vector<std::pair<std::int64_t, double>> points;
};

struct RunOutput {
  RunRow row;
  std::vector<Curve> exploit, params, radius, cum_reward;
};

// Values of a per-round quantity at the grid rounds, read off the pull log.
Curve grid_cum_reward(const RunTrace& trace, const std::vector<std::int64_t>& grid) {
  Curve c{"cum_reward", {}};
  double total = 0.0;
  std::size_t k = 0;
  for (std::int64_t g : grid) {
    while (k < trace.pulls.size() && trace.pulls[k].round <= g) total += trace.pulls[k++].reward;
    c.points.emplace_back(g, total);
  }
  return c;
}

Curve grid_exploit(const RunTrace& trace, const BanditInstance& inst, std::int64_t horizon,
                   const std::vector<std::int64_t>& grid) {
  Curve c{"exploit_score_by_round", {}};
  const auto& out = trace.ledger.outputs();
  double total = 0.0;
  std::size_t k = 0;
  for (std::int64_t g : grid) {
    while (k < out.size() && out[k].round <= g) {
      total += static_cast<double>(horizon - out[k].round) *
               (inst.mean(out[k].arm) - inst.threshold());
      ++k;
    }
    c.points.emplace_back(g, total);
  }
  return c;
}

// Identification radius of the best arm at each grid round: alpha ||x|| for
// DGAI (alpha from `alpha_at`), the union bound otherwise.
Curve grid_radius(const RunTrace& trace, const BanditInstance& inst, double delta,
                  const std::vector<std::int64_t>& grid,
                  const std::function<std::optional<double>(std::int64_t)>& alpha_at) {
  Curve c{"best_arm_radius", {}};
  const std::size_t best = inst.best_arm();
  std::int64_t n = 0;
  std::size_t k = 0;
  for (std::int64_t g : grid) {
    while (k < trace.pulls.size() && trace.pulls[k].round <= g) {
      n += trace.pulls[k].arm == best ? 1 : 0;
      ++k;
    }
    if (n == 0) continue;
    const auto alpha = alpha_at(g);
    const double r = alpha ? *alpha / std::sqrt(1.0 + static_cast<double>(n))
                           : union_identification_bound(n, inst.arms(), delta);
    c.points.emplace_back(g, r);
  }
  return c;
}

std::function<std::optional<double>(std::int64_t)> alpha_from_log(
    const std::vector<ParamPoint>& log, double initial) {
  return [&log, initial](std::int64_t t) -> std::optional<double> {
    double a = initial;
    for (const ParamPoint& p : log) {
      if (p.step > t) break;
      a = p.alpha;
    }
    return a;
  };
}

void summarize_trace(RunOutput& out, const RunTrace& trace, const BanditInstance& inst,
                     std::int64_t horizon, bool identifies) {
  out.row.exploit_score = exploit_score(trace, inst, horizon);
  out.row.cum_reward = cumulative_reward(trace);
  out.row.tau_stop = stop_round(trace);
  out.row.n_good_output = trace.ledger.outputs().size();
  out.row.n_false_good = false_good_count(trace, inst);
  out.row.identifies = identifies;
  const auto& outputs = trace.ledger.outputs();
  out.row.first_output_bad = !outputs.empty() && !inst.is_good(outputs.front().arm);
}

RunOutput run_one(const ExperimentConfig& c, const RunnerSpec& runner,
                  const BanditInstance& inst, std::int64_t horizon, std::uint64_t seed,
                  const std::vector<std::int64_t>& grid) {
  RunOutput out;
  out.row.algorithm = runner.label;
  out.row.seed = seed;
  out.row.horizon = horizon;

  const bool want_log = c.emit_policy_log;
  auto finish = [&](RunTrace& trace, bool identifies) {
    summarize_trace(out, trace, inst, horizon, identifies);
    out.cum_reward.push_back(grid_cum_reward(trace, grid));
    if (identifies) out.exploit.push_back(grid_exploit(trace, inst, horizon, grid));
    if (want_log) out.row.policy_log = std::move(trace.policy_log);
  };

  switch (runner.kind) {
    case RunnerKind::Episode:
    case RunnerKind::PlainUCB: {
      AlgorithmSpec spec{runner.algorithm, c.delta, c.hyper};
      EpisodeOptions eo;
      eo.identify = runner.kind == RunnerKind::Episode;
      eo.log_policy = want_log;
      RunTrace trace = run_gai_episode(spec, inst, horizon, seed, eo);
      if (eo.identify) {
        out.radius.push_back(grid_radius(trace, inst, c.delta, grid,
                                         [](std::int64_t) { return std::nullopt; }));
      }
      finish(trace, eo.identify);
      break;
    }
    case RunnerKind::SoftUCBGOffline:
    case RunnerKind::DGAIOffline: {
      OfflineOptions oo;
      oo.algorithm = runner.algorithm;
      oo.delta = c.delta;
      oo.delta_policy = c.hyper.delta_policy;
      OfflineResult res = offline_train(inst, c.epochs, horizon, c.train, seed, oo);
      Curve ex{"exploit_score_by_epoch", {}};
      Curve alpha{"alpha", {}};
      Curve beta{"beta", {}};
      for (const EpochRecord& e : res.epochs) {
        ex.points.emplace_back(e.epoch, e.exploit_score);
        alpha.points.emplace_back(e.epoch, e.alpha);
        beta.points.emplace_back(e.epoch, e.beta);
      }
      out.exploit.push_back(std::move(ex));
      if (runner.kind == RunnerKind::DGAIOffline) out.params.push_back(std::move(alpha));
      out.params.push_back(std::move(beta));
      // Radius of the last epoch's run, which used the parameters before the
      // final update.
      const double used_alpha =
          res.epochs.size() >= 2 ? res.epochs[res.epochs.size() - 2].alpha : c.train.alpha;
      if (runner.kind == RunnerKind::DGAIOffline) {
        out.radius.push_back(grid_radius(res.final_trace, inst, c.delta, grid,
                                         [used_alpha](std::int64_t) { return used_alpha; }));
      } else {
        out.radius.push_back(grid_radius(res.final_trace, inst, c.delta, grid,
                                         [](std::int64_t) { return std::nullopt; }));
      }
      finish(res.final_trace, true);
      if (want_log) {
        // offline_train does not log policies; replay the last epoch.
        AlgorithmSpec spec{runner.algorithm, c.delta, c.hyper};
        spec.hyper.alpha = used_alpha;
        spec.hyper.beta =
            res.epochs.size() >= 2 ? res.epochs[res.epochs.size() - 2].beta : c.train.beta;
        EpisodeOptions eo;
        eo.log_policy = true;
        out.row.policy_log = run_gai_episode(spec, inst, horizon, seed, eo).policy_log;
      }
      break;
    }
    case RunnerKind::DGAIOnline:
    case RunnerKind::MabThreshold: {
      OnlineOptions oo;
      oo.delta = c.delta;
      oo.delta_policy = c.hyper.delta_policy;
      oo.log_policy = want_log;
      const bool online_dgai = runner.kind == RunnerKind::DGAIOnline;
      RunTrace trace = online_dgai ? online_train(inst, horizon, c.train, seed, oo)
                                   : mab_threshold_train(inst, horizon, c.train, seed, oo);
      Curve alpha{"alpha", {}};
      Curve beta{"beta", {}};
      for (const ParamPoint& p : trace.params_log) {
        alpha.points.emplace_back(p.step, p.alpha);
        beta.points.emplace_back(p.step, p.beta);
      }
      out.params.push_back(std::move(alpha));
      out.params.push_back(std::move(beta));
      if (online_dgai) {
        out.radius.push_back(
            grid_radius(trace, inst, c.delta, grid, alpha_from_log(trace.params_log, c.train.alpha)));
      }
      finish(trace, online_dgai);
      break;
    }
  }
  return out;
}

// Mean over runs of each (metric, step), keeping first-seen metric order and
// ascending steps.
void average_curves(const std::string& algorithm,
                    const std::vector<const std::vector<Curve>*>& per_run,
                    std::vector<SeriesPoint>& sink) {
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::int64_t, std::pair<double, std::size_t>>> acc;
  for (const auto* curves : per_run) {
    for (const Curve& c : *curves) {
      if (std::find(metrics.begin(), metrics.end(), c.metric) == metrics.end()) {
        metrics.push_back(c.metric);
      }
      auto& m = acc[c.metric];
      for (const auto& [step, v] : c.points) {
        auto& slot = m[step];
        slot.first += v;
        slot.second += 1;
      }
    }
  }
  for (const std::string& metric : metrics) {
    for (const auto& [step, slot] : acc[metric]) {
      sink.push_back(SeriesPoint{algorithm, metric, step,
                                 slot.first / static_cast<double>(slot.second)});
    }
  }
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNA;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return kNA;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRow>& runs,
                                         const std::vector<RunnerSpec>& order,
                                         const std::string& dataset) {
  std::vector<AggregateRow> rows;
  for (const RunnerSpec& spec : order) {
    AggregateRow a;
    a.algorithm = spec.label;
    a.dataset = dataset;
    std::vector<double> ex, cr, ts;
    std::size_t any_false = 0;
    std::size_t pac_fail = 0;
    bool identifies = true;
    for (const RunRow& r : runs) {
      if (r.algorithm != spec.label) continue;
      ++a.n_runs;
      if (r.failed) {
        ++a.n_failed;
        continue;
      }
      identifies = r.identifies;
      ex.push_back(r.exploit_score);
      cr.push_back(r.cum_reward);
      ts.push_back(static_cast<double>(r.tau_stop));
      any_false += r.n_false_good > 0 ? 1 : 0;
      pac_fail += r.pac_fail ? 1 : 0;
    }
    a.exploit_mean = mean_of(ex);
    a.exploit_sd = sd_of(ex);
    a.cum_reward_mean = mean_of(cr);
    a.cum_reward_sd = sd_of(cr);
    a.tau_stop_mean = mean_of(ts);
    a.tau_stop_sd = sd_of(ts);
    const double ok = static_cast<double>(ex.size());
    a.false_good_rate = identifies && ok > 0 ? static_cast<double>(any_false) / ok : kNA;
    a.pac_error = identifies && ok > 0 ? static_cast<double>(pac_fail) / ok : kNA;
    rows.push_back(a);
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem problem = make_problem(config);
  const std::vector<std::int64_t> grid = round_grid(problem.horizon);

  ExperimentResult result;
  result.dataset_label = config.dataset;
  result.horizon = problem.horizon;

  const std::size_t reps = static_cast<std::size_t>(config.repetitions);
  const std::size_t total = config.algorithms.size() * reps;

  // Arm sets per repetition, shared by every algorithm.
  std::vector<BanditInstance> instances;
  for (std::size_t r = 0; r < reps; ++r) {
    instances.push_back(problem.fixed ? *problem.fixed
                                      : make_preset_instance(problem.preset,
                                                             config.base_seed + r));
  }
  result.arms = static_cast<std::int64_t>(instances.front().arms());
  if (problem.horizon < result.arms) {
    throw ConfigError("horizon " + std::to_string(problem.horizon) + " is below the arm count " +
                      std::to_string(result.arms));
  }

  std::vector<RunOutput> outputs(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      const RunnerSpec& runner = config.algorithms[job / reps];
      const std::size_t r = job % reps;
      const std::uint64_t seed = config.base_seed + r;
      RunOutput out;
      try {
        out = run_one(config, runner, instances[r], problem.horizon, seed, grid);
      } catch (const std::exception& e) {
        out = RunOutput{};
        out.row.algorithm = runner.label;
        out.row.seed = seed;
        out.row.horizon = problem.horizon;
        out.row.failed = true;
        out.row.error = e.what();
      }
      out.row.run_id = job;
      out.row.dataset = config.dataset;
      outputs[job] = std::move(out);
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), total);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t job = 0; job < total; ++job) {
    RunOutput& o = outputs[job];
    if (!o.row.failed && o.row.identifies) {
      const BanditInstance& inst = instances[job % reps];
      // lambda = 1: fail when there is a good arm and the first output is
      // missing or bad, or when there is none and something was output.
      const bool has_good = inst.good_count() >= 1;
      o.row.pac_fail = has_good ? (o.row.n_good_output == 0 || o.row.first_output_bad)
                                : o.row.n_good_output >= 1;
    }
  }

  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    const std::string& label = config.algorithms[a].label;
    std::vector<const std::vector<Curve>*> ex, pa, ra, cr;
    for (std::size_t r = 0; r < reps; ++r) {
      const RunOutput& o = outputs[a * reps + r];
      if (o.row.failed) continue;
      ex.push_back(&o.exploit);
      pa.push_back(&o.params);
      ra.push_back(&o.radius);
      cr.push_back(&o.cum_reward);
    }
    average_curves(label, ex, result.series.exploit);
    average_curves(label, pa, result.series.params);
    average_curves(label, ra, result.series.radius);
    average_curves(label, cr, result.series.cum_reward);
  }

  result.runs.reserve(total);
  for (RunOutput& o : outputs) result.runs.push_back(std::move(o.row));
  result.aggregate = aggregate_runs(result.runs, config.algorithms, config.dataset);
  return result;
}

void write_runs_csv(const std::vector<RunRow>& runs, std::ostream& out) {
  CsvWriter w(out);
  w.row({"run_id", "algorithm", "dataset", "seed", "T", "exploit_score", "cum_reward",
         "tau_stop", "n_good_output", "n_false_good"});
  for (const RunRow& r : runs) {
    w.field(static_cast<unsigned long long>(r.run_id))
        .field(r.algorithm)
        .field(r.dataset)
        .field(static_cast<unsigned long long>(r.seed))
        .field(static_cast<long long>(r.horizon));
    if (r.failed) {
      w.na().na().na().na().na();
    } else {
      w.field(r.exploit_score)
          .field(r.cum_reward)
          .field(static_cast<long long>(r.tau_stop))
          .field(static_cast<unsigned long long>(r.n_good_output))
          .field(static_cast<unsigned long long>(r.n_false_good));
    }
    w.end_row();
  }
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, std::ostream& out) {
  CsvWriter w(out);
  w.row({"algorithm", "dataset", "n_runs", "n_failed", "exploit_mean", "exploit_sd",
         "cum_reward_mean", "cum_reward_sd", "tau_stop_mean", "tau_stop_sd", "false_good_rate",
         "pac_error"});
  for (const AggregateRow& a : rows) {
    w.field(a.algorithm)
        .field(a.dataset)
        .field(static_cast<unsigned long long>(a.n_runs))
        .field(static_cast<unsigned long long>(a.n_failed))
        .field(a.exploit_mean)
        .field(a.exploit_sd)
        .field(a.cum_reward_mean)
        .field(a.cum_reward_sd)
        .field(a.tau_stop_mean)
        .field(a.tau_stop_sd)
        .field(a.false_good_rate)
        .field(a.pac_error);
    w.end_row();
  }
}

void write_series_csv(const std::vector<SeriesPoint>& points, std::ostream& out) {
  CsvWriter w(out);
  w.row({"algorithm", "metric", "epoch_or_round", "value"});
  for (const SeriesPoint& p : points) {
    w.field(p.algorithm).field(p.metric).field(static_cast<long long>(p.epoch_or_round)).field(
        p.value);
    w.end_row();
  }
}

std::vector<SeriesPoint> smooth_series(const std::vector<SeriesPoint>& points, int window) {
  if (window <= 1) return points;
  std::vector<SeriesPoint> out = points;
  std::size_t start = 0;
  while (start < points.size()) {
    std::size_t end = start;
    while (end < points.size() && points[end].algorithm == points[start].algorithm &&
           points[end].metric == points[start].metric) {
      ++end;
    }
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      sum += points[i].value;
      const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), i - start + 1);
      if (i - start + 1 > static_cast<std::size_t>(window)) {
        sum -= points[i - static_cast<std::size_t>(window)].value;
      }
      out[i].value = sum / static_cast<double>(w);
    }
    start = end;
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

std::vector<std::string> emit_plot_series(const ExperimentResult& result,
                                          const std::filesystem::path& dir, int smooth) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> warnings;
  const std::pair<const char*, const std::vector<SeriesPoint>*> files[] = {
      {"fig1_exploit.csv", &result.series.exploit},
      {"fig2_params.csv", &result.series.params},
      {"fig3_radius.csv", &result.series.radius},
      {"fig4_cum_reward.csv", &result.series.cum_reward},
  };
  for (const auto& [name, points] : files) {
    if (points->empty()) {
      warnings.push_back(std::string("warning: no data for ") + name + ", skipped");
      continue;
    }
    const std::vector<SeriesPoint> data = smooth_series(*points, smooth);
    write_file(dir / name, [&](std::ostream& o) { write_series_csv(data, o); });
  }
  return warnings;
}

std::vector<std::string> write_results(const ExperimentResult& result,
                                       const ExperimentConfig& config) {
  const std::filesystem::path& dir = config.output_dir;
  std::filesystem::create_directories(dir);
  write_file(dir / "runs.csv", [&](std::ostream& o) { write_runs_csv(result.runs, o); });
  write_file(dir / "aggregate.csv",
             [&](std::ostream& o) { write_aggregate_csv(result.aggregate, o); });
  std::vector<std::string> warnings = emit_plot_series(result, dir, config.smooth);
  if (config.emit_policy_log) {
    std::filesystem::create_directories(dir / "policy");
    for (const RunRow& r : result.runs) {
      if (r.failed) continue;
      write_file(dir / "policy" / ("run_" + std::to_string(r.run_id) + ".csv"),
                 [&](std::ostream& o) {
                   CsvWriter w(o);
                   w.row({"round", "arm", "probability"});
                   for (std::size_t t = 0; t < r.policy_log.size(); ++t) {
                     for (std::size_t i = 0; i < r.policy_log[t].size(); ++i) {
                       if (r.policy_log[t][i] == 0.0) continue;
                       w.field(static_cast<unsigned long long>(t + 1))
                           .field(static_cast<unsigned long long>(i))
                           .field(r.policy_log[t][i]);
                       w.end_row();
                     }
                   }
                 });
    }
  }
  for (const RunRow& r : result.runs) {
    if (r.failed) {
      warnings.push_back("warning: run " + std::to_string(r.run_id) + " (" + r.algorithm +
                         ", seed " + std::to_string(r.seed) + ") failed: " + r.error);
    }
  }
  return warnings;
}

}  // namespace gai
