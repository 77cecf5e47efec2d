#include <doctest.h>

#include "fairaug/compare.hpp"
#include "fairaug/error.hpp"
#include "fairaug/report.hpp"
#include "fairaug/stats.hpp"
#include "fairaug/synth.hpp"

using namespace fairaug;

namespace {

RunSummary run(std::vector<double> acc, double dp, double eo) {
  RunSummary r;
  r.labels = {"a", "b", "c"};
  for (double v : acc) r.class_accuracy.push_back(v);
  r.dp_disparity = dp;
  r.eo_disparity = eo;
  return r;
}

const ComparisonRow& find(const std::vector<ComparisonRow>& rows, const std::string& cls,
                          const std::string& metric) {
  for (const auto& r : rows) {
    if (r.class_label == cls && r.metric == metric) return r;
  }
  throw std::runtime_error("row not found");
}

}  // namespace

TEST_CASE("two runs per side") {
  const std::vector<RunSummary> base{run({0.8, 0.7, 0.6}, 0.142, 0.187), run({0.82, 0.72, 0.64}, 0.142, 0.187)};
  const std::vector<RunSummary> cand{run({0.85, 0.8, 0.75}, 0.092, 0.121), run({0.86, 0.83, 0.77}, 0.092, 0.121)};
  const auto rows = compare_runs(base, cand);
  REQUIRE(rows.size() == 6);
  const auto& a = find(rows, "a", "accuracy");
  CHECK(a.baseline_mean == doctest::Approx(0.81));
  CHECK(a.candidate_mean == doctest::Approx(0.855));
  CHECK(a.delta == doctest::Approx(0.045));
  CHECK(*a.relative_change == doctest::Approx(0.045 / 0.81));
  CHECK(*a.baseline_std == doctest::Approx(stats::mean_std(std::vector<double>{0.8, 0.82}).std));
  CHECK(*a.p_value == stats::paired_t_test(std::vector<double>{0.85, 0.86}, std::vector<double>{0.8, 0.82}).p_value);

  const auto& dp = find(rows, "", "dp_disparity");
  CHECK(*dp.reduction == doctest::Approx(0.352).epsilon(0.003));
  CHECK(*find(rows, "", "eo_disparity").reduction == doctest::Approx(0.353).epsilon(0.003));

  const auto& mean = find(rows, "", "mean_accuracy");
  CHECK(mean.p_value.has_value());
  const auto by_run = compare_runs(base, cand, PairBy::run);
  CHECK(*find(by_run, "", "mean_accuracy").p_value !=
        *mean.p_value);

  const auto text = comparison_csv(rows);
  CHECK(text.rfind("class,metric,baseline_mean", 0) == 0);
  CHECK(to_json(rows).size() == 6);
}

TEST_CASE("single runs carry no std or per-class p") {
  const std::vector<RunSummary> base{run({0.8, 0.7, 0.6}, 0.2, 0.3)};
  const std::vector<RunSummary> cand{run({0.9, 0.8, 0.6}, 0.1, 0.1)};
  const auto rows = compare_runs(base, cand);
  CHECK_FALSE(find(rows, "a", "accuracy").baseline_std.has_value());
  CHECK_FALSE(find(rows, "a", "accuracy").p_value.has_value());
  CHECK(find(rows, "", "mean_accuracy").p_value.has_value());
  CHECK_THROWS_AS(compare_runs(base, std::vector<RunSummary>{}), ValidationError);
  auto other = cand;
  other[0].labels = {"a", "b", "d"};
  CHECK_THROWS_AS(compare_runs(base, other), ValidationError);
  CHECK(parse_pair_by("run") == PairBy::run);
  CHECK_THROWS(parse_pair_by("sample"));
}

TEST_CASE("summaries from a report and its JSON agree") {
  const auto rc = synth::random_prediction_counts(2, 4, 200);
  const auto fx = synth::generate_predictions(rc.labels, rc.counts);
  const auto a = summarize(fx.expected);
  const auto b = summarize(report::to_json(fx.expected));
  CHECK(a.labels == b.labels);
  CHECK(a.class_accuracy == b.class_accuracy);
  CHECK(a.dp_disparity == b.dp_disparity);
  CHECK(a.eo_disparity == b.eo_disparity);
}
