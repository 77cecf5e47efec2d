#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fairaug {

// Non-negative attribution magnitudes over an H x W grid, row-major.
struct SaliencyRaster {
  std::string sample_id;
  int height = 0;
  int width = 0;
  std::vector<double> values;
};

enum class Region : std::uint8_t { background = 0, object = 1, transition = 2 };

struct RegionMask {
  std::string sample_id;
  int height = 0;
  int width = 0;
  std::vector<Region> labels;
};

struct MassSplit {
  double object = 0.0;
  double background = 0.0;
  double transition = 0.0;
};

// Share of total saliency in each region. Throws ValidationError on a
// dimension mismatch or negative values, DomainError on zero total mass.
MassSplit mass_split(const SaliencyRaster& raster, const RegionMask& mask);

// Element-wise mean of per-sample splits. Throws ValidationError if empty.
MassSplit mean_mass_split(std::span<const MassSplit> splits);

// Cosine similarity between the element-wise mean rasters of two groups.
// Throws ValidationError for empty groups or mismatched dimensions and
// DomainError when either mean raster has zero norm.
double condition_similarity(std::span<const SaliencyRaster> group_a,
                            std::span<const SaliencyRaster> group_b);

struct EnvShareResult {
  double share = 0.0;                        // in [0, 1]
  std::vector<std::size_t> environmental;    // feature indices tagged environmental
  std::vector<std::size_t> skipped_features; // constant columns (r undefined)
  std::vector<std::size_t> skipped_samples;  // zero total magnitude
};

// attributions[i][j]: attribution of feature j for sample i (absolute
// values are used). env_values[i][k]: environmental attribute k of sample
// i. A feature is environmental when max_k |pearson(feature j, attribute k)|
// exceeds corr_threshold; the result is the per-sample share of magnitude
// on environmental features, averaged over samples.
EnvShareResult env_attribution_share(const std::vector<std::vector<double>>& attributions,
                                     const std::vector<std::vector<double>>& env_values,
                                     double corr_threshold = 0.5);

// Matrix files. CSV: first line "height,width", then `height` rows of
// `width` values. Binary: magic "FAMX", uint32 height, uint32 width
// (little endian), then height*width little-endian float64. The format is
// chosen by extension (.csv vs anything else -> binary).
SaliencyRaster read_raster(const std::filesystem::path& path, std::string sample_id);
void write_raster(const SaliencyRaster& raster, const std::filesystem::path& path);
// Mask values: 0 background, 1 object, 2 transition.
RegionMask read_mask(const std::filesystem::path& path, std::string sample_id);
void write_mask(const RegionMask& mask, const std::filesystem::path& path);

}  // namespace fairaug
