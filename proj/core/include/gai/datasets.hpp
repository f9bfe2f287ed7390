#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gai/bandit_instance.hpp"

namespace gai {

enum class PresetName { SynthSmall, SynthLarge, MovieLensLike, OpenBanditLike };
enum class DatasetSource { Generated, CsvPath };

std::string_view to_string(PresetName name);
std::optional<PresetName> parse_preset(std::string_view name);
std::vector<PresetName> all_presets();

struct DatasetPreset {
  PresetName name = PresetName::SynthSmall;
  std::int64_t arms = 0;
  std::int64_t horizon = 0;
  double threshold = 0.0;
  DatasetSource source = DatasetSource::Generated;
  // The table's cells as printed, for byte-exact listing.
  std::string arms_text;
  std::string horizon_text;
  std::string threshold_text;
};

DatasetPreset preset(PresetName name);
/// Throws std::invalid_argument for an unknown name.
DatasetPreset preset(std::string_view name);

/// K' = max(2, round(K s)), T' = max(10 K', round(T s)); threshold unchanged.
DatasetPreset scaled_preset(const DatasetPreset& base, double scale);

// Band of the generated synthetic means.
inline constexpr double kSynthMeanLow = 0.49975;
inline constexpr double kSynthMeanHigh = 0.5005;

/// Instance for a Generated preset (uniform means in the synthetic band).
/// CsvPath presets need load_ratings_csv.
BanditInstance make_preset_instance(const DatasetPreset& p, std::uint64_t seed);

struct RatingsCsvOptions {
  std::string rating_column = "rating";
  std::string item_column = "item";
  double threshold_percentile = 95.0;
  std::optional<std::size_t> max_arms;  // keep the most-rated items
};

/// Per-item mean rating min-max rescaled over all ratings, one Bernoulli
/// one-hot arm per item (in order of first appearance), threshold the
/// nearest-rank percentile of the arm means. Errors carry the line number.
BanditInstance load_ratings_csv(const std::filesystem::path& path,
                                const RatingsCsvOptions& options = {});
BanditInstance ratings_from_stream(std::istream& in, const RatingsCsvOptions& options = {});

/// Nearest-rank percentile: the ceil(p/100 n)-th smallest value (at least the first).
double nearest_rank_percentile(std::vector<double> values, double percentile);

}  // namespace gai
