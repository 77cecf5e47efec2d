#include "fairaug/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/io.hpp"

namespace fairaug {

std::vector<PredictionRecord> parse_predictions(std::string_view csv_text) {
  const auto rows = csv::parse(csv_text);
  if (rows.empty()) throw ParseError("predictions file is empty");
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "id" || header[1] != "true_class" ||
      header[2] != "pred_class") {
    throw ParseError("predictions header must start with id,true_class,pred_class");
  }
  const std::size_t n_scores = header.size() - 3;
  std::vector<PredictionRecord> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("predictions row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    PredictionRecord p{row[0], row[1], row[2], std::nullopt};
    if (n_scores) {
      std::vector<double> s(n_scores);
      for (std::size_t k = 0; k < n_scores; ++k) {
        s[k] = csv::parse_double(row[3 + k], "score of '" + row[0] + "'");
      }
      p.scores = std::move(s);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
  return parse_predictions(io::read_text(path));
}

void write_predictions(std::span<const PredictionRecord> preds,
                       std::span<const std::string> labels,
                       const std::filesystem::path& path) {
  std::ostringstream out;
  csv::Row header{"id", "true_class", "pred_class"};
  const bool with_scores = !preds.empty() && preds.front().scores.has_value();
  if (with_scores) {
    for (const auto& l : labels) header.push_back("p_" + l);
  }
  csv::write_row(out, header);
  for (const auto& p : preds) {
    csv::Row row{p.sample_id, p.true_class, p.predicted_class};
    if (with_scores) {
      if (!p.scores) throw ValidationError("prediction '" + p.sample_id + "' lacks scores");
      for (double s : *p.scores) row.push_back(csv::format_double(s));
    }
    csv::write_row(out, row);
  }
  io::write_atomic(path, out.str());
}

std::size_t argmax_lowest(std::span<const double> scores) {
  if (scores.empty()) throw DomainError("argmax of an empty score vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

namespace {

Metric ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void fill_metrics(MetricCell& c) {
  c.accuracy = ratio(c.true_positive, c.support);
  c.recall = ratio(c.true_positive, c.support);
  c.precision = ratio(c.true_positive, c.predicted);
  if (c.precision && c.recall && *c.precision + *c.recall > 0.0) {
    c.f1 = 2.0 * *c.precision * *c.recall / (*c.precision + *c.recall);
  }
}

// max - min over defined entries; 0 when fewer than one is defined.
template <typename Table>
double table_disparity(const Table& t) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& row : t) {
    for (const auto& v : row) {
      if (!v) continue;
      if (!any) lo = hi = *v;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
      any = true;
    }
  }
  return hi - lo;
}

}  // namespace

FairnessReport evaluate(std::span<const PredictionRecord> preds, const Manifest& manifest,
                        Split split, double threshold) {
  const auto& labels = manifest.labels();
  const std::size_t c = labels.size();

  struct Joined {
    std::size_t truth, pred, cond;
  };
  std::vector<Joined> rows;
  rows.reserve(preds.size());
  std::set<std::string_view> seen;
  for (const auto& p : preds) {
    const auto* s = manifest.find(p.sample_id);
    if (!s) throw ValidationError("prediction for unknown sample id '" + p.sample_id + "'");
    if (s->split != split) {
      throw ValidationError("sample '" + p.sample_id + "' is not in the " +
                            std::string(to_string(split)) + " split");
    }
    if (!seen.insert(p.sample_id).second) {
      throw ValidationError("duplicate prediction for sample id '" + p.sample_id + "'");
    }
    if (p.true_class != s->class_label) {
      throw ValidationError("sample '" + p.sample_id + "': true_class '" + p.true_class +
                            "' disagrees with manifest class '" + s->class_label + "'");
    }
    if (!s->env) throw ValidationError("sample '" + p.sample_id + "' lacks env attributes");
    const std::size_t pred = manifest.class_index(p.predicted_class);
    if (p.scores) {
      if (p.scores->size() != c) {
        throw ValidationError("sample '" + p.sample_id + "': expected " + std::to_string(c) +
                              " scores");
      }
      double sum = 0.0;
      for (double v : *p.scores) sum += v;
      if (std::fabs(sum - 1.0) > 1e-6) {
        throw ValidationError("sample '" + p.sample_id + "': scores do not sum to 1");
      }
      if (argmax_lowest(*p.scores) != pred) {
        throw ValidationError("sample '" + p.sample_id +
                              "': pred_class is not the argmax of the scores");
      }
    }
    rows.push_back({manifest.class_index(s->class_label), pred, condition_index(*s->env)});
  }
  if (rows.empty()) {
    throw ValidationError("no predictions overlap the " + std::string(to_string(split)) +
                          " split");
  }

  FairnessReport r;
  r.labels = labels;
  r.num_samples = rows.size();
  r.threshold = threshold;
  r.confusion.assign(c, std::vector<std::size_t>(c, 0));

  // Counts: [class][cond]
  std::vector<std::array<std::size_t, kEnvConditions>> support(c), predicted(c), tp(c);
  std::size_t correct = 0;
  for (const auto& j : rows) {
    ++r.condition_support[j.cond];
    ++support[j.truth][j.cond];
    ++predicted[j.pred][j.cond];
    if (j.truth == j.pred) {
      ++tp[j.truth][j.cond];
      ++correct;
    }
    ++r.confusion[j.truth][j.pred];
  }
  r.overall_accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());

  r.dp.resize(c);
  r.eo.resize(c);
  for (std::size_t y = 0; y < c; ++y) {
    MetricCell cls{labels[y], std::nullopt};
    for (std::size_t e = 0; e < kEnvConditions; ++e) {
      r.dp[y][e] = ratio(predicted[y][e], r.condition_support[e]);
      r.eo[y][e] = ratio(tp[y][e], support[y][e]);
      const std::string key = labels[y] + "/" + condition_name(e);
      if (!r.dp[y][e]) r.undefined_cells.push_back("dp:" + key);
      if (!r.eo[y][e]) r.undefined_cells.push_back("eo:" + key);

      MetricCell cell{labels[y], e, support[y][e], predicted[y][e], tp[y][e]};
      fill_metrics(cell);
      r.per_intersection.push_back(cell);
      cls.support += cell.support;
      cls.predicted += cell.predicted;
      cls.true_positive += cell.true_positive;
    }
    fill_metrics(cls);
    r.per_class.push_back(cls);
    r.dp_by_class.push_back(ratio(cls.predicted, rows.size()));
    r.eo_by_class.push_back(cls.recall);
  }
  r.dp_disparity = table_disparity(r.dp);
  r.eo_disparity = table_disparity(r.eo);
  if (std::any_of(r.per_intersection.begin(), r.per_intersection.end(),
                  [](const auto& m) { return m.defined(); })) {
    r.accuracy_range = accuracy_range(r.per_intersection);
  }
  r.flags = flag_bias(r, threshold);
  return r;
}

std::vector<std::vector<std::size_t>> confusion_matrix(std::span<const PredictionRecord> preds,
                                                       std::span<const std::string> labels) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  auto lookup = [&](const std::string& l) {
    auto it = index.find(l);
    if (it == index.end()) throw ValidationError("unknown class '" + l + "'");
    return it->second;
  };
  std::vector<std::vector<std::size_t>> m(labels.size(),
                                          std::vector<std::size_t>(labels.size(), 0));
  for (const auto& p : preds) ++m[lookup(p.true_class)][lookup(p.predicted_class)];
  return m;
}

double disparity_reduction(double before, double after) {
  if (before == 0.0) throw DomainError("disparity reduction undefined for a zero baseline");
  return (before - after) / before;
}

double accuracy_range(std::span<const double> accuracies) {
  if (accuracies.empty()) throw DomainError("accuracy range needs at least one value");
  const auto [lo, hi] = std::minmax_element(accuracies.begin(), accuracies.end());
  return *hi - *lo;
}

double accuracy_range(std::span<const MetricCell> cells) {
  std::vector<double> acc;
  for (const auto& c : cells) {
    if (c.accuracy) acc.push_back(*c.accuracy);
  }
  if (acc.empty()) throw DomainError("accuracy range: every cell is undefined");
  return accuracy_range(std::span<const double>(acc));
}

std::vector<BiasFlag> flag_bias(double dp_disparity, double eo_disparity, double threshold) {
  std::vector<BiasFlag> flags;
  if (dp_disparity > threshold) flags.push_back({"dp_disparity", dp_disparity, threshold});
  if (eo_disparity > threshold) flags.push_back({"eo_disparity", eo_disparity, threshold});
  return flags;
}

std::vector<BiasFlag> flag_bias(const FairnessReport& report, double threshold) {
  return flag_bias(report.dp_disparity, report.eo_disparity, threshold);
}

}  // namespace fairaug
