#include "fairaug/intersections.hpp"

#include <algorithm>

#include "fairaug/error.hpp"

namespace fairaug {

std::string IntersectionKey::name() const {
  return class_label + "/" + std::string(to_string(lighting)) + "/" +
         std::string(to_string(background));
}

std::vector<IntersectionStats> enumerate_intersections(const Manifest& manifest,
                                                       Split split) {
  const auto samples = manifest.in_split(split);
  if (samples.empty()) {
    throw ValidationError("split '" + std::string(to_string(split)) + "' has no samples");
  }
  std::string missing;
  std::size_t n_missing = 0;
  for (const auto* s : samples) {
    if (s->env) continue;
    if (n_missing < 10) missing += (n_missing ? ", " : "") + s->id;
    ++n_missing;
  }
  if (n_missing) {
    throw ValidationError(std::to_string(n_missing) +
                          " sample(s) lack env attributes: " + missing +
                          (n_missing > 10 ? ", ..." : ""));
  }

  const std::size_t c = manifest.num_classes();
  std::vector<std::size_t> counts(c * kEnvConditions, 0);
  for (const auto* s : samples) {
    ++counts[manifest.class_index(s->class_label) * kEnvConditions + condition_index(*s->env)];
  }
  const double n = static_cast<double>(samples.size());
  std::vector<IntersectionStats> out;
  out.reserve(counts.size());
  for (std::size_t y = 0; y < c; ++y) {
    for (std::size_t e = 0; e < kEnvConditions; ++e) {
      const auto k = counts[y * kEnvConditions + e];
      out.push_back({{manifest.labels()[y], condition_lighting(e), condition_background(e)},
                     k,
                     static_cast<double>(k) / n});
    }
  }
  return out;
}

double ClassWeights::weight(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return weights[i];
  }
  throw ValidationError("no weight for class '" + std::string(label) + "'");
}

double ClassWeights::max_weight() const {
  if (weights.empty()) throw DomainError("empty weight table");
  return *std::max_element(weights.begin(), weights.end());
}

ClassWeights class_weights_from_counts(std::vector<std::string> labels,
                                       std::vector<std::size_t> counts) {
  if (labels.size() != counts.size() || labels.empty()) {
    throw ValidationError("class weights: labels and counts must align and be non-empty");
  }
  ClassWeights w;
  w.total = 0;
  for (auto n : counts) w.total += n;
  const double c = static_cast<double>(labels.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) {
      throw DomainError("class '" + labels[i] + "' has no samples; weight undefined");
    }
    w.weights.push_back(static_cast<double>(w.total) / (static_cast<double>(counts[i]) * c));
  }
  w.labels = std::move(labels);
  w.counts = std::move(counts);
  return w;
}

ClassWeights compute_class_weights(const Manifest& manifest, Split split) {
  return class_weights_from_counts(manifest.labels(), manifest.class_counts(split));
}

ClassWeights uniform_class_weights(const Manifest& manifest, Split split, double w) {
  if (!(w > 0.0)) throw ValidationError("uniform weight must be positive");
  ClassWeights out;
  out.labels = manifest.labels();
  out.counts = manifest.class_counts(split);
  for (auto n : out.counts) out.total += n;
  out.weights.assign(out.labels.size(), w);
  return out;
}

stats::Correlation representation_correlation(
    std::span<const IntersectionStats> cells,
    const std::map<IntersectionKey, double>& accuracy_by_key) {
  std::vector<double> props, accs;
  for (const auto& c : cells) {
    if (c.count == 0) continue;
    auto it = accuracy_by_key.find(c.key);
    if (it == accuracy_by_key.end()) continue;
    props.push_back(c.proportion);
    accs.push_back(it->second);
  }
  return stats::pearson(props, accs);
}

}  // namespace fairaug
