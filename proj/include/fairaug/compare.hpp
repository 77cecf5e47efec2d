#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaug/fairness.hpp"

namespace fairaug {

// The numbers of one evaluation run that a comparison needs.
struct RunSummary {
  std::vector<std::string> labels;
  std::vector<Metric> class_accuracy;  // label order
  double dp_disparity = 0.0;
  double eo_disparity = 0.0;
};

RunSummary summarize(const FairnessReport& r);
// Reads an evaluation report as written by report::to_json.
RunSummary summarize(const nlohmann::json& report);

// Axis the mean-accuracy p-value pairs over: per-class accuracies averaged
// over runs, or per-run macro accuracies.
enum class PairBy { class_label, run };
PairBy parse_pair_by(std::string_view s);

struct ComparisonRow {
  std::string class_label;  // empty for summary rows
  std::string metric;       // accuracy, mean_accuracy, dp_disparity, eo_disparity
  double baseline_mean = 0.0;
  std::optional<double> baseline_std;  // needs >= 2 runs
  double candidate_mean = 0.0;
  std::optional<double> candidate_std;
  double delta = 0.0;  // candidate - baseline
  std::optional<double> relative_change;  // delta / baseline when baseline != 0
  std::optional<double> p_value;
  std::optional<double> reduction;  // disparity rows only
};

// Per-class accuracy rows, then mean accuracy, DP and EO disparity. Both
// sides must share the label list. Per-class p-values pair runs by index
// and need at least two runs on each side with equal counts. Classes with
// an undefined accuracy in some run use the runs where it is defined.
std::vector<ComparisonRow> compare_runs(std::span<const RunSummary> baseline,
                                        std::span<const RunSummary> candidate,
                                        PairBy pair_by = PairBy::class_label);

std::string comparison_csv(std::span<const ComparisonRow> rows);
nlohmann::json to_json(std::span<const ComparisonRow> rows);

}  // namespace fairaug
