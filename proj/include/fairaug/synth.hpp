#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairaug/environment.hpp"
#include "fairaug/fairness.hpp"
#include "fairaug/image.hpp"
#include "fairaug/manifest.hpp"

namespace fairaug::synth {

enum class FixtureKind { constant, two_tone, checkerboard, step_edge, gradient };

std::string_view to_string(FixtureKind k);
FixtureKind parse_kind(std::string_view s);

struct FixtureSpec {
  FixtureKind kind = FixtureKind::constant;
  int height = 64;
  int width = 64;
  std::string target_class;
  std::uint64_t seed = 0;

  Rgb color_a{100, 100, 100};
  Rgb color_b{255, 255, 255};
  int cell = 8;       // checkerboard cell size in pixels
  int position = -1;  // two_tone: first row of color_b; step_edge: first column of
                      // color_b; -1 means the middle
  int gradient_from = 0;  // gradient: gray level at x = 0
  int gradient_to = 255;  // gradient: gray level at x = width - 1
  int noise = 0;          // uniform integer noise in [-noise, noise] per channel
};

// Attributes known in closed form for a fixture. Lighting is exact when no
// noise is added; edge expectations are set only where the construction
// forces them.
struct ExpectedAttributes {
  std::optional<double> lighting_score;
  std::optional<LightingCat> lighting_cat;
  std::optional<double> edge_density;
  std::optional<BackgroundCat> bg_cat;
};

struct Fixture {
  ImageBuffer image;
  ExpectedAttributes expected;
};

Fixture generate_image(const FixtureSpec& spec);

// How many samples of true class `true_class` are predicted as
// `pred_class` under environment condition `condition`.
struct PredictionCount {
  std::string true_class;
  std::string pred_class;
  std::size_t condition = 0;
  std::size_t count = 0;
};

struct PredictionFixture {
  std::vector<PredictionRecord> predictions;
  Manifest manifest;  // test split, env attributes set per condition
  FairnessReport expected;
};

// Expands the count table into per-sample records and computes the
// expected report directly from the table.
PredictionFixture generate_predictions(const std::vector<std::string>& labels,
                                       const std::vector<PredictionCount>& counts,
                                       double threshold = kDefaultBiasThreshold);

// Random count table with 2..max_classes classes and at most max_samples
// samples; some cells are left empty on purpose.
struct RandomCounts {
  std::vector<std::string> labels;
  std::vector<PredictionCount> counts;
};
RandomCounts random_prediction_counts(std::uint64_t seed, std::size_t max_classes,
                                      std::size_t max_samples);

// Representative env attributes used for a joint condition in generated
// manifests (lighting 40 or 200, edge density 0.05 or 0.3).
EnvAttributes condition_attributes(std::size_t condition);

// Reads a JSON fixture plan and writes images, manifest.csv (+ labels
// sidecar), expected.json, and, when the plan has a test split,
// oracle_predictions.csv that labels every test image with its target
// class. A "prediction_counts" section produces predictions_fixture/.
struct SynthOutput {
  std::filesystem::path manifest;
  std::filesystem::path expected;
  std::optional<std::filesystem::path> oracle_predictions;
  std::size_t images = 0;
};
SynthOutput run_plan(const std::filesystem::path& plan_path, const std::filesystem::path& out_dir);

}  // namespace fairaug::synth
