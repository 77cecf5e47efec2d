#include "fairaug/synth.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fairaug/error.hpp"
#include "fairaug/report.hpp"
#include "fairaug/rng.hpp"

namespace fairaug::synth {

std::string_view to_string(FixtureKind k) {
  switch (k) {
    case FixtureKind::constant: return "constant";
    case FixtureKind::two_tone: return "two_tone";
    case FixtureKind::checkerboard: return "checkerboard";
    case FixtureKind::step_edge: return "step_edge";
    case FixtureKind::gradient: return "gradient";
  }
  return "?";
}

FixtureKind parse_kind(std::string_view s) {
  for (auto k : {FixtureKind::constant, FixtureKind::two_tone, FixtureKind::checkerboard,
                 FixtureKind::step_edge, FixtureKind::gradient}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown fixture kind '" + std::string(s) + "'");
}

namespace {

int value_of(Rgb c) { return std::max({c.r, c.g, c.b}); }
int luma_of(Rgb c) { return (299 * c.r + 587 * c.g + 114 * c.b + 500) / 1000; }

// Number of indices i in [0, n) with (i / cell) even.
long long even_blocks(long long n, long long cell) {
  return (n / (2 * cell)) * cell + std::min(n % (2 * cell), cell);
}

std::uint8_t gray_at(const FixtureSpec& s, int x) {
  const double t = s.width > 1 ? static_cast<double>(x) / (s.width - 1) : 0.0;
  return to_u8(s.gradient_from + (s.gradient_to - s.gradient_from) * t);
}

}  // namespace

Fixture generate_image(const FixtureSpec& s) {
  if (s.height < 1 || s.width < 1) throw ValidationError("fixture dimensions must be positive");
  if (s.cell < 1) throw ValidationError("checkerboard cell must be positive");
  if (s.noise < 0 || s.noise > 255) throw ValidationError("fixture noise must be in [0, 255]");
  const int h = s.height, w = s.width;
  const int split_row = s.position < 0 ? h / 2 : std::min(s.position, h);
  const int split_col = s.position < 0 ? w / 2 : std::min(s.position, w);

  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      Rgb c = s.color_a;
      switch (s.kind) {
        case FixtureKind::constant: break;
        case FixtureKind::two_tone: c = y < split_row ? s.color_a : s.color_b; break;
        case FixtureKind::step_edge: c = x < split_col ? s.color_a : s.color_b; break;
        case FixtureKind::checkerboard:
          c = ((x / s.cell + y / s.cell) % 2 == 0) ? s.color_a : s.color_b;
          break;
        case FixtureKind::gradient: {
          const auto g = gray_at(s, x);
          c = {g, g, g};
          break;
        }
      }
      img.set(x, y, c);
    }
  }

  Fixture f{std::move(img), {}};
  const double n = static_cast<double>(h) * w;
  const double va = value_of(s.color_a), vb = value_of(s.color_b);
  double light = 0.0;
  switch (s.kind) {
    case FixtureKind::constant: light = va; break;
    case FixtureKind::two_tone: light = (split_row * va + (h - split_row) * vb) * w / n; break;
    case FixtureKind::step_edge: light = (split_col * va + (w - split_col) * vb) * h / n; break;
    case FixtureKind::checkerboard: {
      const long long er = even_blocks(h, s.cell), ec = even_blocks(w, s.cell);
      const long long count_a = er * ec + (h - er) * (w - ec);
      light = (static_cast<double>(count_a) * va + (n - static_cast<double>(count_a)) * vb) / n;
      break;
    }
    case FixtureKind::gradient: {
      long long sum = 0;
      for (int x = 0; x < w; ++x) sum += gray_at(s, x);
      light = static_cast<double>(sum) * h / n;
      break;
    }
  }

  if (s.noise > 0) {
    RngStream rng(s.seed, 0, RngStage::fixture);
    for (auto& v : f.image.data()) {
      const int delta = static_cast<int>(rng.below(2 * s.noise + 1)) - s.noise;
      v = static_cast<std::uint8_t>(std::clamp(v + delta, 0, 255));
    }
  } else {
    f.expected.lighting_score = light;
    f.expected.lighting_cat = categorize(light, 0.0).first;
  }

  const int contrast = std::abs(luma_of(s.color_a) - luma_of(s.color_b));
  switch (s.kind) {
    case FixtureKind::constant:
      if (s.noise == 0) {
        f.expected.edge_density = 0.0;
        f.expected.bg_cat = BackgroundCat::simple;
      }
      break;
    case FixtureKind::two_tone:
      // A single straight boundary covers at most ~1/h of the pixels.
      if (h >= 20 && s.noise <= 10) f.expected.bg_cat = BackgroundCat::simple;
      break;
    case FixtureKind::step_edge:
      if (w >= 20 && s.noise <= 10) f.expected.bg_cat = BackgroundCat::simple;
      break;
    case FixtureKind::checkerboard:
      // Boundaries every `cell` pixels in both directions: about 2/cell of
      // the pixels lie on an edge once the cells survive the blur.
      if (s.cell >= 3 && s.cell <= 10 && contrast >= 100 && h >= 2 * s.cell &&
          w >= 2 * s.cell) {
        f.expected.bg_cat = BackgroundCat::complex;
      }
      break;
    case FixtureKind::gradient:
      if (s.noise == 0 && std::abs(s.gradient_to - s.gradient_from) <= 2 * (w - 1)) {
        f.expected.bg_cat = BackgroundCat::simple;
      }
      break;
  }
  return f;
}

EnvAttributes condition_attributes(std::size_t condition) {
  const double light = condition_lighting(condition) == LightingCat::low ? 40.0 : 200.0;
  const double bg = condition_background(condition) == BackgroundCat::simple ? 0.05 : 0.3;
  return make_env(light, bg);
}

PredictionFixture generate_predictions(const std::vector<std::string>& labels,
                                       const std::vector<PredictionCount>& counts,
                                       double threshold) {
  const std::size_t c = labels.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < c; ++i) index[labels[i]] = i;
  auto idx = [&](const std::string& l) {
    auto it = index.find(l);
    if (it == index.end()) throw ValidationError("unknown class '" + l + "' in count table");
    return it->second;
  };

  // table[t][p][e]
  std::vector<std::vector<std::array<std::size_t, kEnvConditions>>> table(
      c, std::vector<std::array<std::size_t, kEnvConditions>>(c, {0, 0, 0, 0}));
  std::vector<SampleRecord> samples;
  std::vector<PredictionRecord> preds;
  std::size_t next_id = 0;
  for (const auto& entry : counts) {
    if (entry.condition >= kEnvConditions) throw ValidationError("condition index out of range");
    const auto t = idx(entry.true_class), p = idx(entry.pred_class);
    table[t][p][entry.condition] += entry.count;
    for (std::size_t k = 0; k < entry.count; ++k) {
      char id[32];
      std::snprintf(id, sizeof id, "s%06zu", next_id++);
      SampleRecord s;
      s.id = id;
      s.image_path = std::string("synthetic/") + id + ".png";
      s.class_label = entry.true_class;
      s.split = Split::test;
      s.env = condition_attributes(entry.condition);
      samples.push_back(s);
      preds.push_back({id, entry.true_class, entry.pred_class, std::nullopt});
    }
  }

  PredictionFixture out;
  out.predictions = std::move(preds);
  out.manifest = Manifest(labels, std::move(samples));

  // Expected report, read straight off the count table.
  auto& r = out.expected;
  r.labels = labels;
  r.threshold = threshold;
  r.confusion.assign(c, std::vector<std::size_t>(c, 0));
  std::size_t total = 0, correct = 0;
  for (std::size_t t = 0; t < c; ++t) {
    for (std::size_t p = 0; p < c; ++p) {
      for (std::size_t e = 0; e < kEnvConditions; ++e) {
        const auto k = table[t][p][e];
        r.confusion[t][p] += k;
        r.condition_support[e] += k;
        total += k;
        if (t == p) correct += k;
      }
    }
  }
  r.num_samples = total;
  r.overall_accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;

  auto frac = [](std::size_t a, std::size_t b) -> Metric {
    return b ? Metric(static_cast<double>(a) / static_cast<double>(b)) : std::nullopt;
  };
  auto finish = [&](MetricCell& m) {
    m.accuracy = frac(m.true_positive, m.support);
    m.recall = frac(m.true_positive, m.support);
    m.precision = frac(m.true_positive, m.predicted);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
      m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    }
  };

  r.dp.resize(c);
  r.eo.resize(c);
  std::vector<double> dp_defined, eo_defined, acc_defined;
  for (std::size_t y = 0; y < c; ++y) {
    MetricCell cls{labels[y], std::nullopt};
    for (std::size_t e = 0; e < kEnvConditions; ++e) {
      std::size_t support = 0, predicted = 0;
      for (std::size_t o = 0; o < c; ++o) {
        support += table[y][o][e];
        predicted += table[o][y][e];
      }
      const std::size_t tp = table[y][y][e];
      r.dp[y][e] = frac(predicted, r.condition_support[e]);
      r.eo[y][e] = frac(tp, support);
      const std::string key = labels[y] + "/" + condition_name(e);
      if (r.dp[y][e]) dp_defined.push_back(*r.dp[y][e]);
      else r.undefined_cells.push_back("dp:" + key);
      if (r.eo[y][e]) eo_defined.push_back(*r.eo[y][e]);
      else r.undefined_cells.push_back("eo:" + key);

      MetricCell cell{labels[y], e, support, predicted, tp};
      finish(cell);
      if (cell.accuracy) acc_defined.push_back(*cell.accuracy);
      r.per_intersection.push_back(cell);
      cls.support += support;
      cls.predicted += predicted;
      cls.true_positive += tp;
    }
    finish(cls);
    r.per_class.push_back(cls);
    r.dp_by_class.push_back(frac(cls.predicted, total));
    r.eo_by_class.push_back(cls.recall);
  }
  auto spread = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  r.dp_disparity = spread(dp_defined);
  r.eo_disparity = spread(eo_defined);
  if (!acc_defined.empty()) r.accuracy_range = spread(acc_defined);
  if (r.dp_disparity > threshold) r.flags.push_back({"dp_disparity", r.dp_disparity, threshold});
  if (r.eo_disparity > threshold) r.flags.push_back({"eo_disparity", r.eo_disparity, threshold});
  return out;
}

RandomCounts random_prediction_counts(std::uint64_t seed, std::size_t max_classes,
                                      std::size_t max_samples) {
  if (max_classes < 2) throw ValidationError("need at least 2 classes");
  RngStream rng(seed, 0, RngStage::fixture);
  RandomCounts out;
  const std::size_t c = 2 + rng.below(static_cast<std::uint32_t>(max_classes - 1));
  for (std::size_t i = 0; i < c; ++i) out.labels.push_back("class" + std::to_string(i));
  // Draw a target size, then spread it over cells with random weights;
  // roughly a third of the cells stay empty.
  const std::size_t target = 1 + rng.below(static_cast<std::uint32_t>(max_samples));
  std::vector<double> weight;
  std::vector<PredictionCount> cells;
  for (std::size_t t = 0; t < c; ++t) {
    for (std::size_t p = 0; p < c; ++p) {
      for (std::size_t e = 0; e < kEnvConditions; ++e) {
        const bool empty = rng.uniform() < 0.33;
        // Diagonal cells are heavier so predictors look plausible.
        const double wgt = empty ? 0.0 : rng.uniform() * (t == p ? 4.0 : 1.0);
        weight.push_back(wgt);
        cells.push_back({out.labels[t], out.labels[p], e, 0});
      }
    }
  }
  double sum = 0.0;
  for (double v : weight) sum += v;
  std::size_t used = 0;
  for (std::size_t i = 0; i < cells.size() && sum > 0.0; ++i) {
    cells[i].count = static_cast<std::size_t>(weight[i] / sum * static_cast<double>(target));
    used += cells[i].count;
  }
  if (used == 0) cells.front().count = 1;
  for (auto& cell : cells) {
    if (cell.count) out.counts.push_back(cell);
  }
  return out;
}

// ---- plan files -------------------------------------------------------------

namespace {

using report::json;

Rgb rgb_from(const json& j, Rgb fallback) {
  if (j.is_null()) return fallback;
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v < 0 || v > 255) throw ValidationError("color value out of range");
    const auto u = static_cast<std::uint8_t>(v);
    return {u, u, u};
  }
  if (!j.is_array() || j.size() != 3) throw ValidationError("colors are [r, g, b] or a gray level");
  Rgb c;
  std::uint8_t* dst[3] = {&c.r, &c.g, &c.b};
  for (int i = 0; i < 3; ++i) {
    const int v = j[i].get<int>();
    if (v < 0 || v > 255) throw ValidationError("color value out of range");
    *dst[i] = static_cast<std::uint8_t>(v);
  }
  return c;
}

FixtureSpec spec_from(const json& j, std::uint64_t seed) {
  FixtureSpec s;
  s.kind = parse_kind(j.at("kind").get<std::string>());
  s.height = j.value("height", 64);
  s.width = j.value("width", 64);
  s.target_class = j.at("class").get<std::string>();
  s.seed = j.value("seed", seed);
  s.color_a = rgb_from(j.value("color_a", json()), s.color_a);
  s.color_b = rgb_from(j.value("color_b", json()), s.color_b);
  s.cell = j.value("cell", s.cell);
  s.position = j.value("position", s.position);
  s.gradient_from = j.value("gradient_from", s.gradient_from);
  s.gradient_to = j.value("gradient_to", s.gradient_to);
  s.noise = j.value("noise", s.noise);
  return s;
}

json expected_json(const ExpectedAttributes& e) {
  json j = json::object();
  if (e.lighting_score) j["lighting_score"] = *e.lighting_score;
  if (e.lighting_cat) j["lighting_cat"] = to_string(*e.lighting_cat);
  if (e.edge_density) j["edge_density"] = *e.edge_density;
  if (e.bg_cat) j["bg_cat"] = to_string(*e.bg_cat);
  return j;
}

// Random fixture i of a "random_images" block: the class cycles through
// the class list; kind, colors and geometry come from the fixture stream.
FixtureSpec random_spec(const json& block, std::uint64_t seed, std::size_t i) {
  const auto classes = block.at("classes").get<std::vector<std::string>>();
  if (classes.empty()) throw ValidationError("random_images.classes is empty");
  RngStream rng(seed, i, RngStage::fixture);
  FixtureSpec s;
  s.height = block.value("height", 64);
  s.width = block.value("width", 64);
  s.target_class = classes[i % classes.size()];
  s.seed = seed ^ (0x9E3779B97F4A7C15ull * (i + 1));
  s.kind = static_cast<FixtureKind>(rng.below(5));
  auto color = [&] {
    return Rgb{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
               static_cast<std::uint8_t>(rng.below(256))};
  };
  s.color_a = color();
  s.color_b = color();
  s.cell = 3 + static_cast<int>(rng.below(30));
  s.position = static_cast<int>(rng.below(static_cast<std::uint32_t>(std::max(s.width, s.height))));
  s.gradient_from = static_cast<int>(rng.below(256));
  s.gradient_to = static_cast<int>(rng.below(256));
  s.noise = static_cast<int>(rng.below(static_cast<std::uint32_t>(block.value("max_noise", 0) + 1)));
  return s;
}

}  // namespace

SynthOutput run_plan(const std::filesystem::path& plan_path, const std::filesystem::path& out_dir) {
  const auto plan = report::read_json(plan_path);
  const std::uint64_t seed = plan.value("seed", std::uint64_t{0});
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  struct Item {
    std::string id;
    Split split;
    FixtureSpec spec;
  };
  std::vector<Item> items;
  try {
    for (const auto& j : plan.value("images", json::array())) {
      items.push_back({j.at("id").get<std::string>(),
                       parse_split(j.value("split", std::string("train"))), spec_from(j, seed)});
    }
    if (plan.contains("random_images")) {
      const auto& block = plan["random_images"];
      std::vector<std::pair<Split, std::size_t>> splits;
      if (block.contains("splits")) {
        for (const auto& [name, n] : block["splits"].items()) {
          splits.emplace_back(parse_split(name), n.get<std::size_t>());
        }
        std::sort(splits.begin(), splits.end());
      } else {
        splits.emplace_back(parse_split(block.value("split", std::string("train"))),
                            block.at("count").get<std::size_t>());
      }
      std::size_t i = 0;
      for (const auto& [split, n] : splits) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
          char id[32];
          std::snprintf(id, sizeof id, "img_%05zu", i);
          items.push_back({id, split, random_spec(block, seed, i)});
        }
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(plan_path.string() + ": " + e.what());
  }

  std::vector<SampleRecord> samples;
  json expected_images = json::object();
  for (const auto& it : items) {
    const auto fx = generate_image(it.spec);
    const std::string rel = "images/" + it.id + ".png";
    write_png(fx.image, out_dir / rel);
    samples.push_back({it.id, rel, it.spec.target_class, it.split, std::nullopt, std::nullopt});
    auto e = expected_json(fx.expected);
    e["kind"] = to_string(it.spec.kind);
    e["class"] = it.spec.target_class;
    expected_images[it.id] = e;
  }

  std::vector<std::string> labels;
  if (plan.contains("labels")) {
    labels = plan["labels"].get<std::vector<std::string>>();
  } else {
    std::set<std::string> distinct;
    for (const auto& s : samples) distinct.insert(s.class_label);
    labels.assign(distinct.begin(), distinct.end());
  }

  SynthOutput out;
  out.images = samples.size();
  json expected = {{"images", expected_images}};

  if (plan.contains("prediction_counts")) {
    const auto& pc = plan["prediction_counts"];
    std::vector<PredictionCount> counts;
    try {
      for (const auto& c : pc.at("counts")) {
        counts.push_back({c.at("true").get<std::string>(), c.at("pred").get<std::string>(),
                          parse_condition(c.at("condition").get<std::string>()),
                          c.at("count").get<std::size_t>()});
      }
    } catch (const json::exception& e) {
      throw ValidationError(plan_path.string() + ": " + e.what());
    }
    const auto fx = generate_predictions(pc.at("labels").get<std::vector<std::string>>(), counts);
    const auto dir = out_dir / "predictions_fixture";
    std::filesystem::create_directories(dir);
    write_manifest(fx.manifest, dir / "manifest.csv");
    write_predictions(fx.predictions, fx.manifest.labels(), dir / "predictions.csv");
    report::write_json(report::to_json(fx.expected), dir / "expected_report.json");
    expected["predictions_fixture"] = "predictions_fixture/expected_report.json";
  }

  if (!samples.empty()) {
    Manifest m(labels, samples);
    out.manifest = out_dir / "manifest.csv";
    write_manifest(m, out.manifest);
    const auto test = m.in_split(Split::test);
    if (!test.empty()) {
      std::vector<PredictionRecord> preds;
      for (const auto* s : test) preds.push_back({s->id, s->class_label, s->class_label, std::nullopt});
      out.oracle_predictions = out_dir / "oracle_predictions.csv";
      write_predictions(preds, labels, *out.oracle_predictions);
    }
  }
  out.expected = out_dir / "expected.json";
  report::write_json(expected, out.expected);
  return out;
}

}  // namespace fairaug::synth
