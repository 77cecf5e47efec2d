#pragma once

#include <string>
#include <vector>

#include "fairaug/environment.hpp"
#include "fairaug/image.hpp"
#include "fairaug/manifest.hpp"

namespace fairaug {

// Edge detector configuration. Thresholds apply to the L2 magnitude of the
// raw 3x3 Sobel responses computed on 0-255 intensities (the same units
// OpenCV's Canny uses with L2 gradients).
struct CannyParams {
  double sigma = 1.4;
  int kernel_size = 5;  // odd, >= 3
  double low_threshold = 50.0;
  double high_threshold = 150.0;

  void validate() const;  // throws ValidationError
};

// Mean of the HSV value channel, V = max(R, G, B), on the 0-255 scale.
double lighting_score(const ImageBuffer& img);

// Luma 0.299R + 0.587G + 0.114B rounded half away from zero.
std::vector<std::uint8_t> to_luma(const ImageBuffer& img);

// Normalized 1-D Gaussian taps for the separable blur.
std::vector<double> gaussian_kernel(int size, double sigma);

// Binary edge map (row-major, 1 = edge): Gaussian blur, Sobel, non-maximum
// suppression and 8-connected hysteresis. Borders replicate edge pixels.
std::vector<std::uint8_t> canny_edges(const ImageBuffer& img, const CannyParams& params);

// Fraction of pixels in the Canny edge map.
double edge_density(const ImageBuffer& img, const CannyParams& params = {});

struct ExtractOptions {
  CannyParams canny;
  // Resample to 224x224 before edge detection (lighting is unaffected).
  bool resize_first = false;
  // false: first failure aborts. true: failing samples keep no env and are
  // reported.
  bool skip_errors = false;
  unsigned threads = 1;
};

EnvAttributes extract_attributes(const ImageBuffer& img, const ExtractOptions& opts = {});

struct SampleFailure {
  std::string sample_id;
  std::string message;
};

struct ExtractResult {
  Manifest manifest;
  std::vector<SampleFailure> failures;
};

// Fills env attributes for every sample (existing values are recomputed).
// Throws Error naming the sample id on the first failure unless
// opts.skip_errors is set.
ExtractResult extract_all(const Manifest& manifest, const ExtractOptions& opts = {});

}  // namespace fairaug
