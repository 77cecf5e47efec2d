#pragma once

// Helpers shared by the unit and acceptance tests: scratch directories and
// naive reference computations that deliberately share no code with the
// library beyond its data types.

#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "fairaug/fairness.hpp"
#include "fairaug/image.hpp"
#include "fairaug/manifest.hpp"

namespace testsupport {

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("fairaug_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Per-sample tally of every table in a fairness report. Written as one
// pass per quantity, the slow obvious way.
struct CountingOracle {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<std::array<std::optional<double>, 4>> dp, eo, cell_accuracy, cell_precision;
  std::optional<double> dp_disparity_max, dp_disparity_min, eo_disparity_max, eo_disparity_min;
  double overall_accuracy = 0.0;
};

inline int env_of(const fairaug::SampleRecord& s) {
  const int light = s.env->lighting_score < 85.0 ? 0 : 1;
  const int bg = s.env->bg_complexity > 0.1 ? 1 : 0;
  return light * 2 + bg;
}

inline CountingOracle count_oracle(const std::vector<fairaug::PredictionRecord>& preds,
                                   const fairaug::Manifest& m) {
  CountingOracle o;
  o.labels = m.labels();
  const std::size_t c = o.labels.size();
  auto idx = [&](const std::string& l) {
    for (std::size_t i = 0; i < c; ++i) {
      if (o.labels[i] == l) return i;
    }
    return c;
  };
  o.confusion.assign(c, std::vector<std::size_t>(c, 0));
  std::size_t correct = 0;
  for (const auto& p : preds) {
    o.confusion[idx(p.true_class)][idx(p.predicted_class)] += 1;
    if (p.true_class == p.predicted_class) correct += 1;
  }
  o.overall_accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());

  o.dp.resize(c);
  o.eo.resize(c);
  o.cell_accuracy.resize(c);
  o.cell_precision.resize(c);
  for (std::size_t y = 0; y < c; ++y) {
    for (int e = 0; e < 4; ++e) {
      std::size_t in_env = 0, pred_y = 0, true_y = 0, hit = 0;
      for (const auto& p : preds) {
        if (env_of(*m.find(p.sample_id)) != e) continue;
        ++in_env;
        if (p.predicted_class == o.labels[y]) ++pred_y;
        if (p.true_class == o.labels[y]) ++true_y;
        if (p.true_class == o.labels[y] && p.predicted_class == o.labels[y]) ++hit;
      }
      if (in_env) o.dp[y][e] = static_cast<double>(pred_y) / static_cast<double>(in_env);
      if (true_y) {
        o.eo[y][e] = static_cast<double>(hit) / static_cast<double>(true_y);
        o.cell_accuracy[y][e] = o.eo[y][e];
      }
      if (pred_y) o.cell_precision[y][e] = static_cast<double>(hit) / static_cast<double>(pred_y);
    }
  }
  auto extremes = [](const auto& table, auto& hi, auto& lo) {
    for (const auto& row : table) {
      for (const auto& v : row) {
        if (!v) continue;
        if (!hi || *v > *hi) hi = *v;
        if (!lo || *v < *lo) lo = *v;
      }
    }
  };
  extremes(o.dp, o.dp_disparity_max, o.dp_disparity_min);
  extremes(o.eo, o.eo_disparity_max, o.eo_disparity_min);
  return o;
}

inline fairaug::ImageBuffer random_image(std::mt19937_64& gen, int w, int h) {
  std::uniform_int_distribution<int> d(0, 255);
  fairaug::ImageBuffer img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(gen));
  return img;
}

}  // namespace testsupport
