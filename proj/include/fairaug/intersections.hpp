#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fairaug/environment.hpp"
#include "fairaug/manifest.hpp"
#include "fairaug/stats.hpp"

namespace fairaug {

struct IntersectionKey {
  std::string class_label;
  LightingCat lighting = LightingCat::high;
  BackgroundCat background = BackgroundCat::simple;

  std::size_t condition() const { return condition_index(lighting, background); }
  std::string name() const;  // "Table/low/complex"

  friend auto operator<=>(const IntersectionKey&, const IntersectionKey&) = default;
};

struct IntersectionStats {
  IntersectionKey key;
  std::size_t count = 0;
  double proportion = 0.0;  // count / N of the split
};

// One entry per (class, lighting, background) key, C x 2 x 2 in total, in
// label order then condition order. Zero-count cells are included.
// Throws ValidationError naming the samples that lack env attributes, or
// when the split is empty.
std::vector<IntersectionStats> enumerate_intersections(const Manifest& manifest, Split split);

// Per-class augmentation weights w_y = N / (n_y * C).
struct ClassWeights {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;  // n_y
  std::vector<double> weights;      // w_y
  std::size_t total = 0;            // N

  double weight(std::string_view label) const;
  double max_weight() const;
};

// Throws DomainError if any class has no samples.
ClassWeights class_weights_from_counts(std::vector<std::string> labels,
                                       std::vector<std::size_t> counts);
ClassWeights compute_class_weights(const Manifest& manifest, Split split = Split::train);

// Every class gets the same weight (uniform-intensity comparison runs).
ClassWeights uniform_class_weights(const Manifest& manifest, Split split, double w);

// Pearson correlation between cell proportion and cell accuracy. Cells
// with zero count or without an accuracy entry are left out. Throws
// DomainError for fewer than 3 usable cells or a constant series.
stats::Correlation representation_correlation(
    std::span<const IntersectionStats> cells,
    const std::map<IntersectionKey, double>& accuracy_by_key);

}  // namespace fairaug
