#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaug/augment.hpp"
#include "fairaug/fairness.hpp"
#include "fairaug/intersections.hpp"

namespace fairaug::report {

using nlohmann::json;

// Undefined metrics serialize as null.
json metric_json(const Metric& m);

json to_json(const FairnessReport& r);
json to_json(const ClassWeights& w);
json to_json(std::span<const IntersectionStats> cells);
json to_json(const AugmentationParams& p);

// Pretty-printed JSON with a trailing newline, written atomically.
void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

// CSV renderings. Undefined metrics are empty fields.
std::string intersections_csv(std::span<const IntersectionStats> cells);
std::string dp_eo_csv(const FairnessReport& r);
std::string metric_cells_csv(std::span<const MetricCell> cells);
std::string confusion_csv(const FairnessReport& r);

// Plot-data CSVs mirroring the figures: class distribution and env
// attribute breakdown (from a manifest split), per-class performance,
// DP/EO bars with disparities, confusion matrix.
void write_distribution_plot_data(const Manifest& m, Split split,
                                  const std::filesystem::path& dir);
void write_evaluation_plot_data(const FairnessReport& r, const std::filesystem::path& dir);

}  // namespace fairaug::report
