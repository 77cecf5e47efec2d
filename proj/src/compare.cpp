#include "fairaug/compare.hpp"

#include <algorithm>
#include <sstream>

#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/stats.hpp"

namespace fairaug {

RunSummary summarize(const FairnessReport& r) {
  RunSummary s{r.labels, {}, r.dp_disparity, r.eo_disparity};
  for (const auto& c : r.per_class) s.class_accuracy.push_back(c.accuracy);
  return s;
}

RunSummary summarize(const nlohmann::json& report) {
  try {
    RunSummary s;
    s.labels = report.at("labels").get<std::vector<std::string>>();
    s.class_accuracy.assign(s.labels.size(), std::nullopt);
    for (const auto& c : report.at("per_class")) {
      const auto label = c.at("class").get<std::string>();
      const auto it = std::find(s.labels.begin(), s.labels.end(), label);
      if (it == s.labels.end()) throw ValidationError("per_class entry for unknown class " + label);
      const auto& acc = c.at("accuracy");
      if (!acc.is_null()) s.class_accuracy[it - s.labels.begin()] = acc.get<double>();
    }
    s.dp_disparity = report.at("demographic_parity").at("disparity").get<double>();
    s.eo_disparity = report.at("equal_opportunity").at("disparity").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("not an evaluation report: ") + e.what());
  }
}

PairBy parse_pair_by(std::string_view s) {
  if (s == "class") return PairBy::class_label;
  if (s == "run") return PairBy::run;
  throw ValidationError("pair-by must be 'class' or 'run'");
}

namespace {

struct Side {
  double mean = 0.0;
  std::optional<double> std;
};

Side describe(const std::vector<double>& xs) {
  if (xs.empty()) throw DomainError("no defined values to compare");
  if (xs.size() == 1) return {xs.front(), std::nullopt};
  const auto ms = stats::mean_std(xs);
  return {ms.mean, ms.std};
}

ComparisonRow make_row(std::string cls, std::string metric, const std::vector<double>& a,
                       const std::vector<double>& b) {
  const auto sa = describe(a), sb = describe(b);
  ComparisonRow row{std::move(cls), std::move(metric), sa.mean, sa.std, sb.mean, sb.std};
  row.delta = sb.mean - sa.mean;
  if (sa.mean != 0.0) row.relative_change = row.delta / sa.mean;
  return row;
}

double macro_accuracy(const RunSummary& r) {
  std::vector<double> defined;
  for (const auto& m : r.class_accuracy) {
    if (m) defined.push_back(*m);
  }
  return stats::mean(defined);
}

}  // namespace

std::vector<ComparisonRow> compare_runs(std::span<const RunSummary> baseline,
                                        std::span<const RunSummary> candidate, PairBy pair_by) {
  if (baseline.empty() || candidate.empty()) {
    throw ValidationError("comparison needs at least one run on each side");
  }
  const auto& labels = baseline.front().labels;
  for (auto side : {baseline, candidate}) {
    for (const auto& r : side) {
      if (r.labels != labels) throw ValidationError("runs being compared have different label lists");
    }
  }
  const bool paired_runs = baseline.size() == candidate.size() && baseline.size() >= 2;

  std::vector<ComparisonRow> rows;
  std::vector<double> class_base, class_cand;  // per-class means with both sides defined
  for (std::size_t y = 0; y < labels.size(); ++y) {
    std::vector<double> a, b;
    for (const auto& r : baseline) {
      if (r.class_accuracy[y]) a.push_back(*r.class_accuracy[y]);
    }
    for (const auto& r : candidate) {
      if (r.class_accuracy[y]) b.push_back(*r.class_accuracy[y]);
    }
    if (a.empty() || b.empty()) continue;
    auto row = make_row(labels[y], "accuracy", a, b);
    if (paired_runs && a.size() == baseline.size() && b.size() == candidate.size()) {
      row.p_value = stats::paired_t_test(b, a).p_value;
    }
    class_base.push_back(row.baseline_mean);
    class_cand.push_back(row.candidate_mean);
    rows.push_back(row);
  }

  std::vector<double> macro_a, macro_b;
  for (const auto& r : baseline) macro_a.push_back(macro_accuracy(r));
  for (const auto& r : candidate) macro_b.push_back(macro_accuracy(r));
  auto mean_row = make_row("", "mean_accuracy", macro_a, macro_b);
  if (pair_by == PairBy::class_label && class_base.size() >= 2) {
    mean_row.p_value = stats::paired_t_test(class_cand, class_base).p_value;
  } else if (pair_by == PairBy::run && paired_runs) {
    mean_row.p_value = stats::paired_t_test(macro_b, macro_a).p_value;
  }
  rows.push_back(mean_row);

  for (const char* metric : {"dp_disparity", "eo_disparity"}) {
    const bool dp = metric[0] == 'd';
    std::vector<double> a, b;
    for (const auto& r : baseline) a.push_back(dp ? r.dp_disparity : r.eo_disparity);
    for (const auto& r : candidate) b.push_back(dp ? r.dp_disparity : r.eo_disparity);
    auto row = make_row("", metric, a, b);
    if (row.baseline_mean > 0.0) row.reduction = disparity_reduction(row.baseline_mean, row.candidate_mean);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string opt_text(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  csv::write_row(out, {"class", "metric", "baseline_mean", "baseline_std", "candidate_mean",
                       "candidate_std", "delta", "relative_change", "p_value", "reduction"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.class_label, r.metric, csv::format_double(r.baseline_mean),
                         opt_text(r.baseline_std), csv::format_double(r.candidate_mean),
                         opt_text(r.candidate_std), csv::format_double(r.delta),
                         opt_text(r.relative_change), opt_text(r.p_value), opt_text(r.reduction)});
  }
  return out.str();
}

nlohmann::json to_json(std::span<const ComparisonRow> rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"class", r.class_label.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.class_label)},
                   {"metric", r.metric},
                   {"baseline_mean", r.baseline_mean},
                   {"baseline_std", opt_json(r.baseline_std)},
                   {"candidate_mean", r.candidate_mean},
                   {"candidate_std", opt_json(r.candidate_std)},
                   {"delta", r.delta},
                   {"relative_change", opt_json(r.relative_change)},
                   {"p_value", opt_json(r.p_value)},
                   {"reduction", opt_json(r.reduction)}});
  }
  return out;
}

}  // namespace fairaug
