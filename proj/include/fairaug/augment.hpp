#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fairaug/image.hpp"
#include "fairaug/intersections.hpp"
#include "fairaug/manifest.hpp"
#include "fairaug/rng.hpp"

namespace fairaug {

inline constexpr int kOcclusionPatchSize = 10;

// Transform parameters drawn for one training sample with class weight w.
struct AugmentationParams {
  double rotation_deg = 0.0;   // U(-30w, 30w), counter-clockwise as displayed
  double scale = 1.0;          // U(0.8, 1 + 0.2w)
  double translate_x = 0.0;    // pixels, |tx| ~ U(0, 0.2w * min(H, W)), random sign
  double translate_y = 0.0;
  bool flip = false;           // horizontal mirror, p = 0.5
  bool lighting_applied = false;  // p = w / max_y w_y
  double brightness = 1.0;     // U(0.5, 1.5)
  double contrast = 1.0;       // U(0.7, 1.3)
  int occlusion_patches = 0;   // floor(0.15 * H * w)
  double noise_sigma = 0.0;    // 0.1w, on the [0, 1] intensity scale

  friend bool operator==(const AugmentationParams&, const AugmentationParams&) = default;
};

// Upper limits of the parameter ranges for a weight; every drawn value
// satisfies |rotation| <= rotation_max, scale in [0.8, scale_max],
// |translation| <= translate_max.
struct ParamBounds {
  double rotation_max = 0.0;
  double scale_max = 0.0;
  double translate_max = 0.0;
  int occlusion_patches = 0;
  double noise_sigma = 0.0;
};

ParamBounds param_bounds(double w, int height, int width);

// floor(0.15 * height * w).
int occlusion_patch_count(int height, double w);

// Draw order (part of the output contract): rotation, scale, |tx|, |ty|,
// sign x, sign y, flip, lighting coin, brightness, contrast. All ten are
// drawn even when a flag disables their use, so toggling --no-flip does
// not shift any other draw. Throws ValidationError unless
// 0 < w <= max_weight.
AugmentationParams sample_params(double w, double max_weight, int height, int width,
                                 RngStream& rng, bool enable_flip = true);

// Rotation about the image center, scale about the center, translation,
// optional horizontal flip; bilinear sampling with black outside the frame.
// Output has the input's dimensions.
ImageBuffer apply_spatial(const ImageBuffer& img, const AugmentationParams& p);

enum class ContrastPivot { mean, mid };

// b = clamp(v * brightness); v' = (b - pivot) * contrast + pivot, where the
// pivot is the mean of b over all channels (or 128 for `mid`). Rounded once.
ImageBuffer apply_lighting(const ImageBuffer& img, double brightness, double contrast,
                           ContrastPivot pivot = ContrastPivot::mean);

// n black 10x10 patches at uniform top-left positions, clipped to the frame.
ImageBuffer apply_occlusion(const ImageBuffer& img, int n_patches, RngStream& rng);

// v' = round(clamp(v / 255 + N(0, sigma^2), 0, 1) * 255) per channel value.
ImageBuffer apply_noise(const ImageBuffer& img, double sigma, RngStream& rng);

struct AugmentOptions {
  bool enable_flip = true;
  ContrastPivot contrast_pivot = ContrastPivot::mean;
  unsigned threads = 1;
};

// The full per-sample pipeline: spatial, lighting (when drawn), occlusion,
// noise. Streams are keyed by (seed, sample_index, stage).
ImageBuffer augment_image(const ImageBuffer& img, const AugmentationParams& p,
                          std::uint64_t seed, std::uint64_t sample_index,
                          const AugmentOptions& opts);

struct AugmentedSample {
  std::string source_id;
  std::uint64_t sample_index = 0;
  double weight = 0.0;
  AugmentationParams params;
};

struct AugmentResult {
  Manifest manifest;  // train originals + one variant each, sorted by (source id, variant)
  std::vector<AugmentedSample> samples;  // in output order
};

// Augments every train-split sample (sample_index = position within the
// train split in manifest order) and writes "<id>_aug.png" into out_dir.
// The returned manifest's paths are relative to out_dir.
AugmentResult augment_dataset(const Manifest& manifest, const ClassWeights& weights,
                              std::uint64_t master_seed, const std::filesystem::path& out_dir,
                              const AugmentOptions& opts = {});

std::string_view to_string(ContrastPivot p);
ContrastPivot parse_contrast_pivot(std::string_view s);

}  // namespace fairaug
