#include "fairaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fairaug/error.hpp"
#include "fairaug/io.hpp"
#include "fairaug/parallel.hpp"

namespace fairaug {

std::string_view to_string(ContrastPivot p) {
  return p == ContrastPivot::mean ? "mean" : "mid";
}

ContrastPivot parse_contrast_pivot(std::string_view s) {
  if (s == "mean") return ContrastPivot::mean;
  if (s == "mid") return ContrastPivot::mid;
  throw ValidationError("contrast pivot must be 'mean' or 'mid', got '" + std::string(s) + "'");
}

int occlusion_patch_count(int height, double w) {
  // 15 * H * w / 100 rather than 0.15 * H * w: 0.15 is not representable
  // and exact products such as 0.15 * 200 would land just below 30.
  return static_cast<int>(std::floor(15.0 * height * w / 100.0));
}

ParamBounds param_bounds(double w, int height, int width) {
  return {30.0 * w, 1.0 + 0.2 * w, 0.2 * w * std::min(height, width),
          occlusion_patch_count(height, w), 0.1 * w};
}

AugmentationParams sample_params(double w, double max_weight, int height, int width,
                                 RngStream& rng, bool enable_flip) {
  if (!(w > 0.0) || !(max_weight >= w)) {
    throw ValidationError("sample_params needs 0 < w <= max weight");
  }
  const auto b = param_bounds(w, height, width);
  AugmentationParams p;
  p.rotation_deg = rng.uniform(-b.rotation_max, b.rotation_max);
  p.scale = rng.uniform(0.8, b.scale_max);
  const double tx = rng.uniform(0.0, b.translate_max);
  const double ty = rng.uniform(0.0, b.translate_max);
  p.translate_x = rng.bernoulli(0.5) ? -tx : tx;
  p.translate_y = rng.bernoulli(0.5) ? -ty : ty;
  const bool flip = rng.bernoulli(0.5);
  p.flip = enable_flip && flip;
  p.lighting_applied = rng.uniform() < w / max_weight;
  p.brightness = rng.uniform(0.5, 1.5);
  p.contrast = rng.uniform(0.7, 1.3);
  p.occlusion_patches = b.occlusion_patches;
  p.noise_sigma = b.noise_sigma;
  return p;
}

ImageBuffer apply_spatial(const ImageBuffer& img, const AugmentationParams& p) {
  if (p.rotation_deg == 0.0 && p.scale == 1.0 && p.translate_x == 0.0 &&
      p.translate_y == 0.0 && !p.flip) {
    return img;
  }
  if (!(p.scale > 0.0)) throw ValidationError("scale must be positive");
  const int w = img.width(), h = img.height();
  const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
  const double rad = p.rotation_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);

  ImageBuffer out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Invert: translate, scale, rotate (forward rotation is counter-
      // clockwise on screen, i.e. x' = c*x + s*y, y' = -s*x + c*y with y down).
      const double qx = (x - cx - p.translate_x) / p.scale;
      const double qy = (y - cy - p.translate_y) / p.scale;
      double sx = cx + cs * qx - sn * qy;
      const double sy = cy + sn * qx + cs * qy;
      if (p.flip) sx = (w - 1) - sx;

      const double fx0 = std::floor(sx), fy0 = std::floor(sy);
      const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
      const double ax = sx - fx0, ay = sy - fy0;
      if (x0 < -1 || y0 < -1 || x0 >= w || y0 >= h) continue;  // black
      const double wts[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
      const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
      const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
      double acc[3] = {0, 0, 0};
      for (int k = 0; k < 4; ++k) {
        if (xs[k] < 0 || ys[k] < 0 || xs[k] >= w || ys[k] >= h || wts[k] == 0.0) continue;
        for (int c = 0; c < 3; ++c) acc[c] += wts[k] * img.channel(xs[k], ys[k], c);
      }
      out.set(x, y, {to_u8(acc[0]), to_u8(acc[1]), to_u8(acc[2])});
    }
  }
  return out;
}

ImageBuffer apply_lighting(const ImageBuffer& img, double brightness, double contrast,
                           ContrastPivot pivot) {
  if (brightness == 1.0 && contrast == 1.0) return img;
  const auto src = img.data();
  std::vector<double> b(src.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    b[i] = std::clamp(src[i] * brightness, 0.0, 255.0);
    sum += b[i];
  }
  const double mu = pivot == ContrastPivot::mean ? sum / static_cast<double>(b.size()) : 128.0;
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = to_u8((b[i] - mu) * contrast + mu);
  return ImageBuffer(img.width(), img.height(), std::move(out));
}

ImageBuffer apply_occlusion(const ImageBuffer& img, int n_patches, RngStream& rng) {
  if (n_patches <= 0) return img;
  ImageBuffer out = img;
  const int w = img.width(), h = img.height();
  for (int i = 0; i < n_patches; ++i) {
    const int x0 = static_cast<int>(rng.below(static_cast<std::uint32_t>(w)));
    const int y0 = static_cast<int>(rng.below(static_cast<std::uint32_t>(h)));
    const int x1 = std::min(x0 + kOcclusionPatchSize, w);
    const int y1 = std::min(y0 + kOcclusionPatchSize, h);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) out.set(x, y, {0, 0, 0});
    }
  }
  return out;
}

ImageBuffer apply_noise(const ImageBuffer& img, double sigma, RngStream& rng) {
  if (!(sigma >= 0.0)) throw ValidationError("noise sigma must be non-negative");
  if (sigma == 0.0) return img;
  const auto src = img.data();
  std::vector<std::uint8_t> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = std::clamp(src[i] / 255.0 + sigma * rng.normal(), 0.0, 1.0);
    out[i] = to_u8(v * 255.0);
  }
  return ImageBuffer(img.width(), img.height(), std::move(out));
}

ImageBuffer augment_image(const ImageBuffer& img, const AugmentationParams& p,
                          std::uint64_t seed, std::uint64_t sample_index,
                          const AugmentOptions& opts) {
  ImageBuffer x = apply_spatial(img, p);
  if (p.lighting_applied) x = apply_lighting(x, p.brightness, p.contrast, opts.contrast_pivot);
  RngStream occ(seed, sample_index, RngStage::occlusion);
  x = apply_occlusion(x, p.occlusion_patches, occ);
  RngStream noise(seed, sample_index, RngStage::noise);
  return apply_noise(x, p.noise_sigma, noise);
}

AugmentResult augment_dataset(const Manifest& manifest, const ClassWeights& weights,
                              std::uint64_t master_seed, const std::filesystem::path& out_dir,
                              const AugmentOptions& opts) {
  const auto train = manifest.in_split(Split::train);
  if (train.empty()) throw ValidationError("manifest has no train samples to augment");
  const double max_w = weights.max_weight();
  for (const auto& label : manifest.labels()) {
    if (!(weights.weight(label) > 0.0)) {
      throw ValidationError("weight for class '" + label + "' must be positive");
    }
  }
  for (const auto* s : train) {
    if (s->id.find_first_of("/\\") != std::string::npos || s->id == "." || s->id == "..") {
      throw ValidationError("sample id '" + s->id + "' cannot be used as a file name");
    }
    if (manifest.find(s->id + "_aug")) {
      throw ValidationError("augmented id '" + s->id + "_aug' collides with an existing sample");
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<AugmentedSample> drawn(train.size());
  parallel_for(train.size(), opts.threads, [&](std::size_t i) {
    const auto& s = *train[i];
    try {
      const auto img = read_image(manifest.resolve(s));
      const double w = weights.weight(s.class_label);
      RngStream rng(master_seed, i, RngStage::params);
      const auto p = sample_params(w, max_w, img.height(), img.width(), rng, opts.enable_flip);
      write_png(augment_image(img, p, master_seed, i, opts), out_dir / (s.id + "_aug.png"));
      drawn[i] = {s.id, i, w, p};
    } catch (const Error& e) {
      throw Error("sample '" + s.id + "': " + e.what());
    }
  });

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return train[a]->id < train[b]->id; });

  std::vector<SampleRecord> records;
  AugmentResult result;
  records.reserve(train.size() * 2);
  for (auto i : order) {
    SampleRecord original = *train[i];
    original.image_path = io::relative_path(manifest.resolve(*train[i]), out_dir);
    SampleRecord aug;
    aug.id = train[i]->id + "_aug";
    aug.image_path = aug.id + ".png";
    aug.class_label = train[i]->class_label;
    aug.split = Split::train;
    aug.source_id = train[i]->id;
    records.push_back(std::move(original));
    records.push_back(std::move(aug));
    result.samples.push_back(drawn[i]);
  }
  result.manifest = Manifest(manifest.labels(), std::move(records));
  result.manifest.set_base_dir(out_dir);
  return result;
}

}  // namespace fairaug
