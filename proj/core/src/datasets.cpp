#include "gai/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "gai/csv.hpp"

namespace gai {

std::string_view to_string(PresetName name) {
  switch (name) {
    case PresetName::SynthSmall: return "SynthSmall";
    case PresetName::SynthLarge: return "SynthLarge";
    case PresetName::MovieLensLike: return "MovieLensLike";
    case PresetName::OpenBanditLike: return "OpenBanditLike";
  }
  return "?";
}

std::vector<PresetName> all_presets() {
  return {PresetName::SynthSmall, PresetName::SynthLarge, PresetName::MovieLensLike,
          PresetName::OpenBanditLike};
}

std::optional<PresetName> parse_preset(std::string_view name) {
  for (PresetName p : all_presets()) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

DatasetPreset preset(PresetName name) {
  switch (name) {
    case PresetName::SynthSmall:
      return {name, 50, 1000000, 0.5, DatasetSource::Generated, "50", "1e6", "0.5"};
    case PresetName::SynthLarge:
      return {name, 1000, 1000000, 0.5, DatasetSource::Generated, "1000", "1e6", "0.5"};
    case PresetName::MovieLensLike:
      return {name, 9527, 100000, 0.071, DatasetSource::CsvPath, "9527", "1e5", "0.071"};
    case PresetName::OpenBanditLike:
      // Horizon kept as printed; override it through the harness config.
      return {name, 80, 107, 0.005, DatasetSource::CsvPath, "80", "107", "0.005"};
  }
  throw std::invalid_argument("unknown preset");
}

DatasetPreset preset(std::string_view name) {
  const auto p = parse_preset(name);
  if (!p) throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  return preset(*p);
}

DatasetPreset scaled_preset(const DatasetPreset& base, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
  if (scale == 1.0) return base;
  DatasetPreset p = base;
  p.arms = std::max<std::int64_t>(2, std::llround(static_cast<double>(base.arms) * scale));
  p.horizon = std::max<std::int64_t>(10 * p.arms,
                                     std::llround(static_cast<double>(base.horizon) * scale));
  p.arms_text = std::to_string(p.arms);
  p.horizon_text = std::to_string(p.horizon);
  return p;
}

BanditInstance make_preset_instance(const DatasetPreset& p, std::uint64_t seed) {
  if (p.source != DatasetSource::Generated) {
    throw std::invalid_argument(std::string(to_string(p.name)) +
                                " is built from a ratings CSV; use load_ratings_csv");
  }
  return make_synthetic_instance(static_cast<std::size_t>(p.arms), kSynthMeanLow,
                                 kSynthMeanHigh, p.threshold, seed);
}

double nearest_rank_percentile(std::vector<double> values, double percentile) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  if (!(percentile >= 0.0 && percentile <= 100.0)) {
    throw std::invalid_argument("percentile must lie in [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

BanditInstance ratings_from_stream(std::istream& in, const RatingsCsvOptions& options) {
  CsvReader reader(in);
  const auto header = reader.next();
  if (!header) throw CsvError(1, "empty file");
  const auto item_col = column_index(*header, options.item_column);
  const auto rating_col = column_index(*header, options.rating_column);
  if (!item_col) throw CsvError(reader.line(), "missing column '" + options.item_column + "'");
  if (!rating_col) {
    throw CsvError(reader.line(), "missing column '" + options.rating_column + "'");
  }

  struct Item {
    double sum = 0.0;
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Item> items;
  std::vector<std::string> order;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  while (auto row = reader.next()) {
    const std::size_t need = std::max(*item_col, *rating_col) + 1;
    if (row->size() < need) {
      throw CsvError(reader.line(), "expected at least " + std::to_string(need) + " fields, got " +
                                        std::to_string(row->size()));
    }
    const double r = parse_double((*row)[*rating_col], reader.line(), options.rating_column);
    const std::string& key = (*row)[*item_col];
    auto [it, inserted] = items.try_emplace(key);
    if (inserted) {
      it->second.first_seen = order.size();
      order.push_back(key);
    }
    it->second.sum += r;
    it->second.count += 1;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (order.empty()) throw CsvError(reader.line() + 1, "no data rows");

  if (options.max_arms && *options.max_arms < order.size()) {
    if (*options.max_arms == 0) throw std::invalid_argument("max_arms must be >= 1");
    std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      return items[a].count > items[b].count;
    });
    order.resize(*options.max_arms);
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      return items[a].first_seen < items[b].first_seen;
    });
  }

  std::vector<double> means;
  means.reserve(order.size());
  const double range = hi - lo;
  for (const std::string& key : order) {
    const Item& item = items[key];
    const double mean = item.sum / static_cast<double>(item.count);
    means.push_back(range > 0.0 ? (mean - lo) / range : std::clamp(mean, 0.0, 1.0));
  }
  const double xi = nearest_rank_percentile(means, options.threshold_percentile);
  return BanditInstance(std::move(means), xi, RewardLaw::Bernoulli);
}

BanditInstance load_ratings_csv(const std::filesystem::path& path,
                                const RatingsCsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return ratings_from_stream(in, options);
}

}  // namespace gai
