#include "fairaug/report.hpp"

#include <sstream>

#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/io.hpp"

namespace fairaug::report {

json metric_json(const Metric& m) { return m ? json(*m) : json(nullptr); }

namespace {

std::string metric_text(const Metric& m) { return m ? csv::format_double(*m) : std::string(); }

json cell_json(const MetricCell& c) {
  json j = {{"class", c.class_label},
            {"support", c.support},
            {"predicted", c.predicted},
            {"true_positive", c.true_positive},
            {"accuracy", metric_json(c.accuracy)},
            {"precision", metric_json(c.precision)},
            {"recall", metric_json(c.recall)},
            {"f1", metric_json(c.f1)}};
  if (c.condition) {
    j["lighting"] = to_string(condition_lighting(*c.condition));
    j["background"] = to_string(condition_background(*c.condition));
  }
  return j;
}

json table_json(const FairnessReport& r,
                const std::vector<std::array<Metric, kEnvConditions>>& t) {
  json out = json::object();
  for (std::size_t y = 0; y < r.labels.size(); ++y) {
    json row = json::object();
    for (std::size_t e = 0; e < kEnvConditions; ++e) row[condition_name(e)] = metric_json(t[y][e]);
    out[r.labels[y]] = row;
  }
  return out;
}

json by_class_json(const FairnessReport& r, const std::vector<Metric>& v) {
  json out = json::object();
  for (std::size_t y = 0; y < r.labels.size(); ++y) out[r.labels[y]] = metric_json(v[y]);
  return out;
}

}  // namespace

json to_json(const FairnessReport& r) {
  json support = json::object();
  for (std::size_t e = 0; e < kEnvConditions; ++e) support[condition_name(e)] = r.condition_support[e];
  json inter = json::array(), per_class = json::array(), flags = json::array();
  for (const auto& c : r.per_intersection) inter.push_back(cell_json(c));
  for (const auto& c : r.per_class) per_class.push_back(cell_json(c));
  for (const auto& f : r.flags) {
    flags.push_back({{"metric", f.metric}, {"value", f.value}, {"threshold", f.threshold}});
  }
  return {
      {"labels", r.labels},
      {"num_samples", r.num_samples},
      {"overall_accuracy", r.overall_accuracy},
      {"condition_support", support},
      {"demographic_parity",
       {{"table", table_json(r, r.dp)},
        {"by_class", by_class_json(r, r.dp_by_class)},
        {"disparity", r.dp_disparity}}},
      {"equal_opportunity",
       {{"table", table_json(r, r.eo)},
        {"by_class", by_class_json(r, r.eo_by_class)},
        {"disparity", r.eo_disparity}}},
      {"per_intersection", inter},
      {"per_class", per_class},
      {"confusion", {{"labels", r.labels}, {"counts", r.confusion}}},
      {"accuracy_range", metric_json(r.accuracy_range)},
      {"undefined_cells", r.undefined_cells},
      {"bias_threshold", r.threshold},
      {"flags", flags},
      {"notes",
       {"Disparities are flagged only when strictly greater than bias_threshold.",
        "Cells with zero support are undefined (null) and excluded from disparities.",
        "Intersection accuracy is the fraction of the cell's samples classified correctly."}},
  };
}

json to_json(const ClassWeights& w) {
  json table = json::object();
  for (std::size_t i = 0; i < w.labels.size(); ++i) {
    table[w.labels[i]] = {{"n", w.counts[i]}, {"w", w.weights[i]}};
  }
  return table;
}

json to_json(std::span<const IntersectionStats> cells) {
  json out = json::array();
  for (const auto& c : cells) {
    out.push_back({{"class", c.key.class_label},
                   {"lighting", to_string(c.key.lighting)},
                   {"background", to_string(c.key.background)},
                   {"count", c.count},
                   {"proportion", c.proportion}});
  }
  return out;
}

json to_json(const AugmentationParams& p) {
  return {{"rotation_deg", p.rotation_deg},
          {"scale", p.scale},
          {"translate_x", p.translate_x},
          {"translate_y", p.translate_y},
          {"flip", p.flip},
          {"lighting_applied", p.lighting_applied},
          {"brightness", p.brightness},
          {"contrast", p.contrast},
          {"occlusion_patches", p.occlusion_patches},
          {"noise_sigma", p.noise_sigma}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  io::write_atomic(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string intersections_csv(std::span<const IntersectionStats> cells) {
  std::ostringstream out;
  csv::write_row(out, {"class", "lighting", "background", "count", "proportion"});
  for (const auto& c : cells) {
    csv::write_row(out, {c.key.class_label, std::string(to_string(c.key.lighting)),
                         std::string(to_string(c.key.background)), std::to_string(c.count),
                         csv::format_double(c.proportion)});
  }
  return out.str();
}

std::string dp_eo_csv(const FairnessReport& r) {
  std::ostringstream out;
  csv::write_row(out, {"class", "lighting", "background", "dp", "eo"});
  for (std::size_t y = 0; y < r.labels.size(); ++y) {
    for (std::size_t e = 0; e < kEnvConditions; ++e) {
      csv::write_row(out, {r.labels[y], std::string(to_string(condition_lighting(e))),
                           std::string(to_string(condition_background(e))),
                           metric_text(r.dp[y][e]), metric_text(r.eo[y][e])});
    }
  }
  return out.str();
}

std::string metric_cells_csv(std::span<const MetricCell> cells) {
  std::ostringstream out;
  const bool with_env = !cells.empty() && cells.front().condition.has_value();
  csv::Row header{"class"};
  if (with_env) header.insert(header.end(), {"lighting", "background"});
  header.insert(header.end(),
                {"support", "accuracy", "precision", "recall", "f1"});
  csv::write_row(out, header);
  for (const auto& c : cells) {
    csv::Row row{c.class_label};
    if (with_env) {
      row.emplace_back(to_string(condition_lighting(*c.condition)));
      row.emplace_back(to_string(condition_background(*c.condition)));
    }
    row.insert(row.end(), {std::to_string(c.support), metric_text(c.accuracy),
                           metric_text(c.precision), metric_text(c.recall), metric_text(c.f1)});
    csv::write_row(out, row);
  }
  return out.str();
}

std::string confusion_csv(const FairnessReport& r) {
  std::ostringstream out;
  csv::Row header{"true\\pred"};
  header.insert(header.end(), r.labels.begin(), r.labels.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < r.labels.size(); ++i) {
    csv::Row row{r.labels[i]};
    for (auto v : r.confusion[i]) row.push_back(std::to_string(v));
    csv::write_row(out, row);
  }
  return out.str();
}

void write_distribution_plot_data(const Manifest& m, Split split,
                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto counts = m.class_counts(split);
  std::ostringstream dist;
  csv::write_row(dist, {"class", "count"});
  for (std::size_t y = 0; y < counts.size(); ++y) {
    csv::write_row(dist, {m.labels()[y], std::to_string(counts[y])});
  }
  io::write_atomic(dir / "class_distribution.csv", dist.str());

  // Per-sample scores for the histogram panels plus per-class category counts.
  std::ostringstream scores;
  csv::write_row(scores, {"id", "class", "lighting_score", "bg_complexity", "lighting", "background"});
  std::vector<std::array<std::size_t, 4>> by_class(m.num_classes(), {0, 0, 0, 0});
  for (const auto* s : m.in_split(split)) {
    if (!s->env) continue;
    csv::write_row(scores, {s->id, s->class_label, csv::format_double(s->env->lighting_score),
                            csv::format_double(s->env->bg_complexity),
                            std::string(to_string(s->env->lighting_cat)),
                            std::string(to_string(s->env->bg_cat))});
    auto& row = by_class[m.class_index(s->class_label)];
    ++row[s->env->lighting_cat == LightingCat::low ? 0 : 1];
    ++row[s->env->bg_cat == BackgroundCat::simple ? 2 : 3];
  }
  io::write_atomic(dir / "env_scores.csv", scores.str());
  std::ostringstream cats;
  csv::write_row(cats, {"class", "low_light", "high_light", "simple_bg", "complex_bg"});
  for (std::size_t y = 0; y < by_class.size(); ++y) {
    csv::write_row(cats, {m.labels()[y], std::to_string(by_class[y][0]),
                          std::to_string(by_class[y][1]), std::to_string(by_class[y][2]),
                          std::to_string(by_class[y][3])});
  }
  io::write_atomic(dir / "env_by_class.csv", cats.str());
}

void write_evaluation_plot_data(const FairnessReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_atomic(dir / "per_class_performance.csv", metric_cells_csv(r.per_class));

  std::ostringstream fair;
  csv::write_row(fair, {"class", "dp", "eo", "dp_disparity", "eo_disparity"});
  for (std::size_t y = 0; y < r.labels.size(); ++y) {
    csv::write_row(fair, {r.labels[y], metric_text(r.dp_by_class[y]), metric_text(r.eo_by_class[y]),
                          csv::format_double(r.dp_disparity), csv::format_double(r.eo_disparity)});
  }
  io::write_atomic(dir / "fairness_by_class.csv", fair.str());
  io::write_atomic(dir / "confusion_matrix.csv", confusion_csv(r));
}

}  // namespace fairaug::report
