#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairaug/environment.hpp"
#include "fairaug/manifest.hpp"

namespace fairaug {

inline constexpr double kDefaultBiasThreshold = 0.15;

struct PredictionRecord {
  std::string sample_id;
  std::string true_class;
  std::string predicted_class;
  std::optional<std::vector<double>> scores;  // one per class, label order

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

// Headered CSV: id,true_class,pred_class[,score columns...]. Score columns
// are taken positionally after the first three, in label order.
std::vector<PredictionRecord> parse_predictions(std::string_view csv_text);
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
void write_predictions(std::span<const PredictionRecord> preds,
                       std::span<const std::string> labels,
                       const std::filesystem::path& path);

// Argmax with ties going to the lowest class index.
std::size_t argmax_lowest(std::span<const double> scores);

// A metric that may be undefined (0/0); never silently zero.
using Metric = std::optional<double>;

struct MetricCell {
  std::string class_label;
  std::optional<std::size_t> condition;  // nullopt for class-level cells
  std::size_t support = 0;    // samples whose true class is class_label (in scope)
  std::size_t predicted = 0;  // samples predicted as class_label (in scope)
  std::size_t true_positive = 0;
  // accuracy: correct / support (the fraction of the cell's members that
  // are classified correctly); precision TP/predicted; recall TP/support;
  // f1 = 2PR/(P+R) when both are defined and P+R > 0.
  Metric accuracy, precision, recall, f1;

  bool defined() const { return accuracy.has_value(); }
  friend bool operator==(const MetricCell&, const MetricCell&) = default;
};

struct BiasFlag {
  std::string metric;  // "dp_disparity" or "eo_disparity"
  double value = 0.0;
  double threshold = 0.0;
  friend bool operator==(const BiasFlag&, const BiasFlag&) = default;
};

struct FairnessReport {
  std::vector<std::string> labels;
  std::size_t num_samples = 0;
  std::array<std::size_t, kEnvConditions> condition_support{};

  // [class][condition]; undefined where the denominator is zero.
  std::vector<std::array<Metric, kEnvConditions>> dp;  // P(pred = y | e)
  std::vector<std::array<Metric, kEnvConditions>> eo;  // P(pred = y | true = y, e)
  double dp_disparity = 0.0;  // max - min over defined dp cells
  double eo_disparity = 0.0;

  // Class marginals: share of all predictions that are y, and overall TPR.
  std::vector<Metric> dp_by_class;
  std::vector<Metric> eo_by_class;

  std::vector<MetricCell> per_intersection;  // class-major, condition-minor
  std::vector<MetricCell> per_class;
  std::vector<std::vector<std::size_t>> confusion;  // [true][pred]
  double overall_accuracy = 0.0;
  Metric accuracy_range;  // over defined per-intersection cells

  std::vector<std::string> undefined_cells;  // "eo:Table/low/complex" style
  double threshold = kDefaultBiasThreshold;
  std::vector<BiasFlag> flags;

  friend bool operator==(const FairnessReport&, const FairnessReport&) = default;
};

// Joins predictions with the manifest split and computes every table.
// Throws ValidationError for an unknown id, an id outside the split, a
// duplicate prediction, a true class disagreeing with the manifest,
// inconsistent score vectors, missing env attributes, or no overlap.
FairnessReport evaluate(std::span<const PredictionRecord> preds, const Manifest& manifest,
                        Split split = Split::test, double threshold = kDefaultBiasThreshold);

// counts[i][j] = #{true i, predicted j} in label order.
std::vector<std::vector<std::size_t>> confusion_matrix(std::span<const PredictionRecord> preds,
                                                       std::span<const std::string> labels);

// (before - after) / before; throws DomainError when before == 0.
double disparity_reduction(double before, double after);

// max - min of the defined accuracies; throws DomainError if none.
double accuracy_range(std::span<const MetricCell> cells);
double accuracy_range(std::span<const double> accuracies);

// One flag per disparity strictly above the threshold.
std::vector<BiasFlag> flag_bias(const FairnessReport& report,
                                double threshold = kDefaultBiasThreshold);
std::vector<BiasFlag> flag_bias(double dp_disparity, double eo_disparity,
                                double threshold = kDefaultBiasThreshold);

}  // namespace fairaug
