#include "fairaug/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <sstream>

#include "fairaug/attributes.hpp"
#include "fairaug/attribution.hpp"
#include "fairaug/augment.hpp"
#include "fairaug/compare.hpp"
#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/fairness.hpp"
#include "fairaug/intersections.hpp"
#include "fairaug/io.hpp"
#include "fairaug/manifest.hpp"
#include "fairaug/report.hpp"
#include "fairaug/rng.hpp"
#include "fairaug/stats.hpp"
#include "fairaug/synth.hpp"

#ifndef FAIRAUG_VERSION
#define FAIRAUG_VERSION "0.0.0"
#endif

namespace fairaug::cli {

std::string_view version() { return FAIRAUG_VERSION; }

namespace {

namespace fs = std::filesystem;
using report::json;

const std::vector<std::string> kSplits{"train", "val", "test"};

json input_digests(const std::vector<fs::path>& files) {
  json out = json::array();
  for (const auto& f : files) out.push_back({{"path", f.string()}, {"sha256", io::sha256_file(f)}});
  return out;
}

// Timestamps are deliberately absent so identical runs give identical bytes.
json run_config(std::string_view subcommand, json flags, std::optional<std::uint64_t> seed,
                const std::vector<fs::path>& inputs) {
  return {{"tool", "fairaug"},
          {"version", version()},
          {"subcommand", subcommand},
          {"flags", std::move(flags)},
          {"seed", seed ? json(*seed) : json(nullptr)},
          {"rng", kRngName},
          {"inputs", input_digests(inputs)}};
}

fs::path sibling(const fs::path& p, std::string_view suffix) {
  return p.parent_path() / (p.stem().string() + std::string(suffix));
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

json canny_json(const CannyParams& c) {
  return {{"sigma", c.sigma},
          {"kernel_size", c.kernel_size},
          {"low_threshold", c.low_threshold},
          {"high_threshold", c.high_threshold},
          {"gradient", "L2 magnitude of 3x3 Sobel on 0-255 luma"},
          {"border", "replicate"},
          {"connectivity", 8}};
}

// ---- extract-attrs ----------------------------------------------------------

struct ExtractArgs {
  std::string manifest, out;
  ExtractOptions opts;
};

void add_extract(CLI::App& app, ExtractArgs& a) {
  auto* sub = app.add_subcommand("extract-attrs", "Compute lighting and background attributes");
  sub->add_option("--manifest", a.manifest, "Input manifest CSV")->required();
  sub->add_option("--out", a.out, "Output manifest CSV with env columns")->required();
  sub->add_option("--canny-sigma", a.opts.canny.sigma, "Gaussian blur sigma")->capture_default_str();
  sub->add_option("--canny-kernel", a.opts.canny.kernel_size, "Gaussian kernel size (odd)")
      ->capture_default_str();
  sub->add_option("--canny-low", a.opts.canny.low_threshold, "Hysteresis low threshold")
      ->capture_default_str();
  sub->add_option("--canny-high", a.opts.canny.high_threshold, "Hysteresis high threshold")
      ->capture_default_str();
  sub->add_flag("--resize-first", a.opts.resize_first, "Resize to 224x224 before edge detection");
  sub->add_flag("--skip-errors", a.opts.skip_errors, "Report undecodable images instead of failing");
  sub->add_option("--threads", a.opts.threads, "Worker cap (0 = all cores)")->capture_default_str();
}

int do_extract(const ExtractArgs& a, std::ostream& out) {
  a.opts.canny.validate();
  const auto m = load_manifest(a.manifest);
  const auto res = extract_all(m, a.opts);
  json failures = json::array();
  for (const auto& f : res.failures) failures.push_back({{"id", f.sample_id}, {"error", f.message}});
  json flags = {{"manifest", a.manifest},
                {"out", a.out},
                {"canny", canny_json(a.opts.canny)},
                {"resize_first", a.opts.resize_first},
                {"skip_errors", a.opts.skip_errors}};
  json run = {{"run_config", run_config("extract-attrs", flags, std::nullopt, {a.manifest})},
              {"num_samples", m.size()},
              {"failures", failures}};
  ensure_parent(a.out);
  write_manifest(res.manifest, a.out);
  report::write_json(run, sibling(a.out, ".run.json"));
  out << "extracted attributes for " << m.size() - res.failures.size() << " of " << m.size()
      << " samples\n";
  return kExitOk;
}

// ---- stats ------------------------------------------------------------------

struct StatsArgs {
  std::string manifest, out, split = "train", accuracy_report, plot_data;
};

void add_stats(CLI::App& app, StatsArgs& a) {
  auto* sub = app.add_subcommand("stats", "Intersection counts and proportions");
  sub->add_option("--manifest", a.manifest, "Manifest with env attributes")->required();
  sub->add_option("--out", a.out, "Output CSV (a JSON twin is written alongside)")->required();
  sub->add_option("--split", a.split)->check(CLI::IsMember(kSplits))->capture_default_str();
  sub->add_option("--accuracy-report", a.accuracy_report,
                  "Evaluation report; adds the proportion/accuracy correlation");
  sub->add_option("--plot-data", a.plot_data, "Directory for distribution plot CSVs");
}

int do_stats(const StatsArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  const auto split = parse_split(a.split);
  const auto cells = enumerate_intersections(m, split);
  std::vector<fs::path> inputs{a.manifest};
  json flags = {{"manifest", a.manifest}, {"out", a.out}, {"split", a.split}};

  json doc = {{"split", a.split}, {"num_samples", m.count(split)}, {"intersections", report::to_json(cells)}};
  if (!a.accuracy_report.empty()) {
    inputs.emplace_back(a.accuracy_report);
    flags["accuracy_report"] = a.accuracy_report;
    const auto rep = report::read_json(a.accuracy_report);
    std::map<IntersectionKey, double> acc;
    try {
      for (const auto& c : rep.at("per_intersection")) {
        if (c.at("accuracy").is_null()) continue;
        acc[{c.at("class").get<std::string>(), parse_lighting_cat(c.at("lighting").get<std::string>()),
             parse_background_cat(c.at("background").get<std::string>())}] =
            c.at("accuracy").get<double>();
      }
    } catch (const json::exception& e) {
      throw ValidationError(a.accuracy_report + ": " + e.what());
    }
    const auto corr = representation_correlation(cells, acc);
    doc["representation_correlation"] = {{"r", corr.r}, {"p_value", corr.p_value}};
  }
  json full = {{"run_config", run_config("stats", flags, std::nullopt, inputs)}};
  full.update(doc);

  ensure_parent(a.out);
  io::write_atomic(a.out, report::intersections_csv(cells));
  report::write_json(full, sibling(a.out, ".json"));
  if (!a.plot_data.empty()) report::write_distribution_plot_data(m, split, a.plot_data);
  out << "wrote " << cells.size() << " intersection cells\n";
  return kExitOk;
}

// ---- weights ----------------------------------------------------------------

struct WeightsArgs {
  std::string manifest, out, split = "train";
  std::optional<double> uniform_w;
};

void add_weights(CLI::App& app, WeightsArgs& a) {
  auto* sub = app.add_subcommand("weights", "Per-class augmentation weights");
  sub->add_option("--manifest", a.manifest)->required();
  sub->add_option("--out", a.out, "Output JSON")->required();
  sub->add_option("--split", a.split)->check(CLI::IsMember(kSplits))->capture_default_str();
  sub->add_option("--uniform-w", a.uniform_w, "Give every class this weight")
      ->check(CLI::PositiveNumber);
}

ClassWeights weights_for(const Manifest& m, Split split, std::optional<double> uniform_w) {
  return uniform_w ? uniform_class_weights(m, split, *uniform_w) : compute_class_weights(m, split);
}

int do_weights(const WeightsArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  const auto w = weights_for(m, parse_split(a.split), a.uniform_w);
  json flags = {{"manifest", a.manifest},
                {"out", a.out},
                {"split", a.split},
                {"uniform_w", a.uniform_w ? json(*a.uniform_w) : json(nullptr)}};
  json doc = {{"run_config", run_config("weights", flags, std::nullopt, {a.manifest})},
              {"total", w.total},
              {"num_classes", w.labels.size()},
              {"formula", a.uniform_w ? "uniform" : "w = N / (n * C)"},
              {"weights", report::to_json(w)},
              {"note", "Weights are evaluated from this manifest's class counts; externally published "
                       "weight values need not match the formula."}};
  ensure_parent(a.out);
  report::write_json(doc, a.out);
  for (std::size_t i = 0; i < w.labels.size(); ++i) {
    out << w.labels[i] << '\t' << w.counts[i] << '\t' << csv::format_double(w.weights[i]) << '\n';
  }
  return kExitOk;
}

// ---- augment ----------------------------------------------------------------

struct AugmentArgs {
  std::string manifest, out, pivot = "mean";
  std::uint64_t seed = 0;
  bool no_flip = false;
  std::optional<double> uniform_w;
  unsigned threads = 0;
};

void add_augment(CLI::App& app, AugmentArgs& a) {
  auto* sub = app.add_subcommand("augment", "Write the bias-weighted augmented training set");
  sub->add_option("--manifest", a.manifest)->required();
  sub->add_option("--seed", a.seed, "Master seed")->required();
  sub->add_option("--out", a.out, "Output directory")->required();
  sub->add_flag("--no-flip", a.no_flip, "Disable the horizontal flip");
  sub->add_option("--contrast-pivot", a.pivot)
      ->check(CLI::IsMember({"mean", "mid"}))
      ->capture_default_str();
  sub->add_option("--uniform-w", a.uniform_w, "Use this weight for every class")
      ->check(CLI::PositiveNumber);
  sub->add_option("--threads", a.threads, "Worker cap (0 = all cores)")->capture_default_str();
}

std::string params_csv(const AugmentResult& r) {
  std::ostringstream out;
  csv::write_row(out, {"id", "source_id", "sample_index", "weight", "rotation_deg", "scale",
                       "translate_x", "translate_y", "flip", "lighting_applied", "brightness",
                       "contrast", "occlusion_patches", "noise_sigma"});
  for (const auto& s : r.samples) {
    const auto& p = s.params;
    csv::write_row(out, {s.source_id + "_aug", s.source_id, std::to_string(s.sample_index),
                         csv::format_double(s.weight), csv::format_double(p.rotation_deg),
                         csv::format_double(p.scale), csv::format_double(p.translate_x),
                         csv::format_double(p.translate_y), p.flip ? "1" : "0",
                         p.lighting_applied ? "1" : "0", csv::format_double(p.brightness),
                         csv::format_double(p.contrast), std::to_string(p.occlusion_patches),
                         csv::format_double(p.noise_sigma)});
  }
  return out.str();
}

int do_augment(const AugmentArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  const auto w = weights_for(m, Split::train, a.uniform_w);
  AugmentOptions opts{!a.no_flip, parse_contrast_pivot(a.pivot), a.threads};
  fs::create_directories(a.out);
  const auto res = augment_dataset(m, w, a.seed, a.out, opts);

  json flags = {{"manifest", a.manifest},
                {"out", a.out},
                {"no_flip", a.no_flip},
                {"contrast_pivot", a.pivot},
                {"uniform_w", a.uniform_w ? json(*a.uniform_w) : json(nullptr)}};
  json transforms = {
      {"order", {"spatial", "lighting", "occlusion", "noise"}},
      {"flip", a.no_flip ? "disabled" : "horizontal, probability 0.5"},
      {"rotation_deg", "U(-30w, 30w), about the image center"},
      {"scale", "U(0.8, 1 + 0.2w), about the image center"},
      {"translation", "|t| ~ U(0, 0.2w * min(H, W)) per axis with an independent random sign"},
      {"interpolation", "bilinear"},
      {"out_of_frame_fill", 0},
      {"lighting_probability", "w / max_y w_y"},
      {"brightness", "U(0.5, 1.5)"},
      {"contrast", "U(0.7, 1.3)"},
      {"contrast_pivot", a.pivot == "mean" ? "mean after brightness" : "128"},
      {"occlusion", "floor(0.15 * H * w) black 10x10 patches, uniform top-left, clipped"},
      {"noise", "N(0, (0.1w)^2) on the [0, 1] pixel scale"},
      {"rounding", "half away from zero, once per stage"},
      {"rng_streams", "key = seed; counter = (block, stage, sample index)"}};
  json doc = {{"run_config", run_config("augment", flags, a.seed, {a.manifest})},
              {"weights", report::to_json(w)},
              {"transforms", transforms},
              {"train_samples", res.samples.size()},
              {"output_records", res.manifest.size()}};
  const fs::path dir(a.out);
  write_manifest(res.manifest, dir / "manifest.csv");
  io::write_atomic(dir / "augment_params.csv", params_csv(res));
  report::write_json(doc, dir / "run_config.json");
  out << "wrote " << res.manifest.size() << " records (" << res.samples.size() << " augmented)\n";
  return kExitOk;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string manifest, predictions, out, split = "test", plot_data;
  double threshold = kDefaultBiasThreshold;
};

void add_evaluate(CLI::App& app, EvaluateArgs& a) {
  auto* sub = app.add_subcommand("evaluate", "Fairness and per-intersection metrics");
  sub->add_option("--manifest", a.manifest, "Manifest with env attributes")->required();
  sub->add_option("--predictions", a.predictions, "Predictions CSV")->required();
  sub->add_option("--out", a.out, "Report JSON (CSV tables are written alongside)")->required();
  sub->add_option("--split", a.split)->check(CLI::IsMember(kSplits))->capture_default_str();
  sub->add_option("--threshold", a.threshold, "Disparity flag threshold")->capture_default_str();
  sub->add_option("--plot-data", a.plot_data, "Directory for evaluation plot CSVs");
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  const auto preds = load_predictions(a.predictions);
  const auto rep = evaluate(preds, m, parse_split(a.split), a.threshold);
  json flags = {{"manifest", a.manifest},
                {"predictions", a.predictions},
                {"out", a.out},
                {"split", a.split},
                {"threshold", a.threshold}};
  json doc = {{"run_config", run_config("evaluate", flags, std::nullopt, {a.manifest, a.predictions})}};
  doc.update(report::to_json(rep));

  const fs::path o(a.out);
  ensure_parent(o);
  io::write_atomic(sibling(o, "_dp_eo.csv"), report::dp_eo_csv(rep));
  io::write_atomic(sibling(o, "_per_intersection.csv"), report::metric_cells_csv(rep.per_intersection));
  io::write_atomic(sibling(o, "_per_class.csv"), report::metric_cells_csv(rep.per_class));
  io::write_atomic(sibling(o, "_confusion.csv"), report::confusion_csv(rep));
  if (!a.plot_data.empty()) report::write_evaluation_plot_data(rep, a.plot_data);
  report::write_json(doc, o);

  out << "accuracy " << csv::format_double(rep.overall_accuracy) << ", dp disparity "
      << csv::format_double(rep.dp_disparity) << ", eo disparity "
      << csv::format_double(rep.eo_disparity);
  for (const auto& f : rep.flags) out << ", " << f.metric << " flagged";
  out << '\n';
  return kExitOk;
}

// ---- compare ----------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> positional, baseline, candidate;
  std::string out, pair_by = "class";
};

void add_compare(CLI::App& app, CompareArgs& a) {
  auto* sub = app.add_subcommand("compare", "Baseline vs candidate deltas and p-values");
  sub->add_option("reports", a.positional, "BASELINE.json CANDIDATE.json");
  sub->add_option("--baseline", a.baseline, "Baseline run reports");
  sub->add_option("--candidate", a.candidate, "Candidate run reports");
  sub->add_option("--pair-by", a.pair_by, "Pairing axis for the mean-accuracy test")
      ->check(CLI::IsMember({"class", "run"}))
      ->capture_default_str();
  sub->add_option("--out", a.out, "Output CSV (a JSON twin is written alongside)")->required();
}

int do_compare(CompareArgs a, std::ostream& out) {
  if (!a.positional.empty()) {
    if (a.positional.size() != 2 || !a.baseline.empty() || !a.candidate.empty()) {
      throw CLI::ValidationError("compare takes two reports or --baseline/--candidate lists");
    }
    a.baseline = {a.positional[0]};
    a.candidate = {a.positional[1]};
  }
  if (a.baseline.empty() || a.candidate.empty()) {
    throw CLI::ValidationError("compare needs baseline and candidate reports");
  }
  std::vector<RunSummary> base, cand;
  std::vector<fs::path> inputs;
  for (const auto& p : a.baseline) {
    base.push_back(summarize(report::read_json(p)));
    inputs.emplace_back(p);
  }
  for (const auto& p : a.candidate) {
    cand.push_back(summarize(report::read_json(p)));
    inputs.emplace_back(p);
  }
  const auto rows = compare_runs(base, cand, parse_pair_by(a.pair_by));
  json flags = {{"baseline", a.baseline}, {"candidate", a.candidate}, {"pair_by", a.pair_by}, {"out", a.out}};
  json doc = {{"run_config", run_config("compare", flags, std::nullopt, inputs)},
              {"rows", to_json(rows)}};
  ensure_parent(a.out);
  io::write_atomic(a.out, comparison_csv(rows));
  report::write_json(doc, sibling(a.out, ".json"));
  out << "compared " << base.size() << " baseline and " << cand.size() << " candidate runs\n";
  return kExitOk;
}

// ---- attribution ------------------------------------------------------------

struct AttributionArgs {
  std::string rasters, masks, manifest, out, split = "test", attributions;
  double corr_threshold = 0.5;
};

void add_attribution(CLI::App& app, AttributionArgs& a) {
  auto* sub = app.add_subcommand("attribution", "Saliency mass split and similarity summary");
  sub->add_option("--rasters", a.rasters, "Directory of <id>.csv / <id>.famx rasters")->required();
  sub->add_option("--masks", a.masks, "Directory of region masks named like the rasters")->required();
  sub->add_option("--manifest", a.manifest, "Manifest with env attributes")->required();
  sub->add_option("--out", a.out, "Summary JSON")->required();
  sub->add_option("--split", a.split)->check(CLI::IsMember(kSplits))->capture_default_str();
  sub->add_option("--attributions", a.attributions,
                  "Per-sample feature attribution CSV (id, then one column per feature)");
  sub->add_option("--corr-threshold", a.corr_threshold)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

std::optional<fs::path> find_matrix(const fs::path& dir, const std::string& id) {
  for (const char* ext : {".csv", ".famx", ".bin"}) {
    auto p = dir / (id + ext);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

json mass_json(const MassSplit& m) {
  return {{"object", m.object}, {"background", m.background}, {"transition", m.transition}};
}

int do_attribution(const AttributionArgs& a, std::ostream& out) {
  const auto m = load_manifest(a.manifest);
  const auto samples = m.in_split(parse_split(a.split));
  std::vector<fs::path> inputs{a.manifest};

  std::map<IntersectionKey, std::vector<MassSplit>> by_key;
  std::array<std::vector<SaliencyRaster>, kEnvConditions> by_condition;
  std::vector<MassSplit> all;
  json missing = json::array();
  for (const auto* s : samples) {
    const auto rp = find_matrix(a.rasters, s->id);
    const auto mp = find_matrix(a.masks, s->id);
    if (!rp || !mp) {
      missing.push_back(s->id);
      continue;
    }
    if (!s->env) throw ValidationError("sample '" + s->id + "' has no env attributes");
    auto raster = read_raster(*rp, s->id);
    const auto split = mass_split(raster, read_mask(*mp, s->id));
    by_key[{s->class_label, s->env->lighting_cat, s->env->bg_cat}].push_back(split);
    all.push_back(split);
    by_condition[condition_index(*s->env)].push_back(std::move(raster));
  }
  if (all.empty()) throw ValidationError("no sample in the split has both a raster and a mask");

  json cells = json::array();
  for (const auto& [key, splits] : by_key) {
    cells.push_back({{"class", key.class_label},
                     {"lighting", to_string(key.lighting)},
                     {"background", to_string(key.background)},
                     {"samples", splits.size()},
                     {"mass", mass_json(mean_mass_split(splits))}});
  }
  json pairs = json::array();
  std::vector<double> sims;
  for (std::size_t i = 0; i < kEnvConditions; ++i) {
    for (std::size_t j = i + 1; j < kEnvConditions; ++j) {
      if (by_condition[i].empty() || by_condition[j].empty()) continue;
      const double s = condition_similarity(by_condition[i], by_condition[j]);
      sims.push_back(s);
      pairs.push_back({{"a", condition_name(i)}, {"b", condition_name(j)}, {"similarity", s}});
    }
  }

  json flags = {{"rasters", a.rasters}, {"masks", a.masks}, {"manifest", a.manifest},
                {"out", a.out},         {"split", a.split}, {"corr_threshold", a.corr_threshold}};
  json doc = {{"split", a.split},
              {"samples", all.size()},
              {"missing", missing},
              {"mass", mass_json(mean_mass_split(all))},
              {"by_intersection", cells},
              {"condition_similarity",
               {{"pairs", pairs}, {"mean", sims.empty() ? json(nullptr) : json(stats::mean(sims))}}}};

  if (!a.attributions.empty()) {
    inputs.emplace_back(a.attributions);
    flags["attributions"] = a.attributions;
    const auto rows = csv::read_file(a.attributions);
    if (rows.size() < 2 || rows[0].size() < 2) {
      throw ParseError(a.attributions + ": need a header and at least one feature column");
    }
    std::vector<std::vector<double>> attr, env;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) {
        throw ParseError(a.attributions + ": row " + std::to_string(r + 1) + " has wrong width");
      }
      const auto* s = m.find(rows[r][0]);
      if (!s) throw ValidationError("attribution row for unknown sample '" + rows[r][0] + "'");
      if (!s->env) throw ValidationError("sample '" + s->id + "' has no env attributes");
      std::vector<double> v;
      for (std::size_t c = 1; c < rows[r].size(); ++c) v.push_back(csv::parse_double(rows[r][c], a.attributions));
      attr.push_back(std::move(v));
      env.push_back({s->env->lighting_score, s->env->bg_complexity});
    }
    const auto share = env_attribution_share(attr, env, a.corr_threshold);
    auto names = [&](const std::vector<std::size_t>& idx) {
      json j = json::array();
      for (auto i : idx) j.push_back(rows[0][i + 1]);
      return j;
    };
    json skipped = json::array();
    for (auto i : share.skipped_samples) skipped.push_back(rows[i + 1][0]);
    doc["env_attribution_share"] = {
        {"share", share.share},
        {"corr_threshold", a.corr_threshold},
        {"environmental_features", names(share.environmental)},
        {"constant_features", names(share.skipped_features)},
        {"skipped_samples", skipped},
        {"rule", "a feature is environmental when max |pearson r| against lighting_score or "
                 "bg_complexity exceeds corr_threshold (interpretive stand-in)"}};
  }
  json full = {{"run_config", run_config("attribution", flags, std::nullopt, inputs)}};
  full.update(doc);
  ensure_parent(a.out);
  report::write_json(full, a.out);
  out << "summarized " << all.size() << " rasters\n";
  return kExitOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string spec, out;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* sub = app.add_subcommand("synth", "Generate fixtures with known attributes and metrics");
  sub->add_option("--spec", a.spec, "Fixture plan JSON")->required();
  sub->add_option("--out", a.out, "Output directory")->required();
}

int do_synth(const SynthArgs& a, std::ostream& out) {
  const auto plan = report::read_json(a.spec);
  const auto res = synth::run_plan(a.spec, a.out);
  json flags = {{"spec", a.spec}, {"out", a.out}};
  json doc = {{"run_config", run_config("synth", flags, plan.value("seed", std::uint64_t{0}), {a.spec})},
              {"images", res.images}};
  report::write_json(doc, fs::path(a.out) / "run_config.json");
  out << "generated " << res.images << " images\n";
  return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intersectional fairness audit and bias-weighted augmentation", "fairaug"};
  app.set_version_flag("--version",
                       std::string("fairaug ") + std::string(version()) + "\nrng " + std::string(kRngName));
  app.require_subcommand(1);

  ExtractArgs extract;
  StatsArgs st;
  WeightsArgs wt;
  AugmentArgs aug;
  EvaluateArgs ev;
  CompareArgs cmp;
  AttributionArgs attr;
  SynthArgs syn;
  add_extract(app, extract);
  add_stats(app, st);
  add_weights(app, wt);
  add_augment(app, aug);
  add_evaluate(app, ev);
  add_compare(app, cmp);
  add_attribution(app, attr);
  add_synth(app, syn);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("extract-attrs")) return do_extract(extract, out);
    if (app.got_subcommand("stats")) return do_stats(st, out);
    if (app.got_subcommand("weights")) return do_weights(wt, out);
    if (app.got_subcommand("augment")) return do_augment(aug, out);
    if (app.got_subcommand("evaluate")) return do_evaluate(ev, out);
    if (app.got_subcommand("compare")) return do_compare(cmp, out);
    if (app.got_subcommand("attribution")) return do_attribution(attr, out);
    if (app.got_subcommand("synth")) return do_synth(syn, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace fairaug::cli
