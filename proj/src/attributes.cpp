#include "fairaug/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "fairaug/error.hpp"
#include "fairaug/parallel.hpp"

namespace fairaug {

void CannyParams::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("canny sigma must be positive");
  if (kernel_size < 3 || kernel_size % 2 == 0) {
    throw ValidationError("canny kernel size must be odd and >= 3");
  }
  if (!(low_threshold >= 0.0) || !(high_threshold >= low_threshold)) {
    throw ValidationError("canny thresholds must satisfy 0 <= low <= high");
  }
}

double lighting_score(const ImageBuffer& img) {
  std::uint64_t sum = 0;
  const auto d = img.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    sum += std::max({d[i], d[i + 1], d[i + 2]});
  }
  return static_cast<double>(sum) / static_cast<double>(img.pixel_count());
}

std::vector<std::uint8_t> to_luma(const ImageBuffer& img) {
  std::vector<std::uint8_t> out(img.pixel_count());
  const auto d = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned v = 299u * d[3 * i] + 587u * d[3 * i + 1] + 114u * d[3 * i + 2];
    out[i] = static_cast<std::uint8_t>((v + 500u) / 1000u);
  }
  return out;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const int r = size / 2;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + r];
  }
  for (auto& v : k) v /= sum;
  return k;
}

namespace {

Plane blur(const std::vector<std::uint8_t>& luma, int w, int h, const CannyParams& p) {
  const auto k = gaussian_kernel(p.kernel_size, p.sigma);
  const int r = p.kernel_size / 2;
  Plane tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y) {
    const auto* row = &luma[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * row[std::clamp(x + i, 0, w - 1)];
      tmp.at(x, y) = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.at(x, std::clamp(y + i, 0, h - 1));
      out.at(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> canny_edges(const ImageBuffer& img, const CannyParams& params) {
  params.validate();
  const int w = img.width();
  const int h = img.height();
  const Plane smooth = blur(to_luma(img), w, h, params);

  auto px = [&](int x, int y) {
    return smooth.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
  Plane mag(w, h);
  // Direction sector per pixel: 0 horizontal, 1 diagonal (down-right),
  // 2 vertical, 3 anti-diagonal (down-left), with y pointing down.
  std::vector<std::uint8_t> sector(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      mag.at(x, y) = std::hypot(gx, gy);
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      std::uint8_t s = 0;
      if (angle >= 22.5 && angle < 67.5) s = 1;
      else if (angle >= 67.5 && angle < 112.5) s = 2;
      else if (angle >= 112.5 && angle < 157.5) s = 3;
      sector[static_cast<std::size_t>(y) * w + x] = s;
    }
  }

  static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  auto mag_or_zero = [&](int x, int y) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag.at(x, y);
  };
  // 0 = none, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(x, y);
      if (!(m > params.low_threshold)) continue;
      const auto* step = kStep[sector[static_cast<std::size_t>(y) * w + x]];
      const double behind = mag_or_zero(x - step[0], y - step[1]);
      const double ahead = mag_or_zero(x + step[0], y + step[1]);
      // Asymmetric tie rule keeps exactly one pixel of a two-pixel plateau.
      if (!(m >= behind && m > ahead)) continue;
      const auto idx = static_cast<std::size_t>(y) * w + x;
      if (m > params.high_threshold) {
        cls[idx] = 2;
        stack.push_back(idx);
      } else {
        cls[idx] = 1;
      }
    }
  }

  while (!stack.empty()) {
    const auto idx = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(idx % w);
    const int y = static_cast<int>(idx / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const auto n = static_cast<std::size_t>(ny) * w + nx;
        if (cls[n] == 1) {
          cls[n] = 2;
          stack.push_back(n);
        }
      }
    }
  }

  std::vector<std::uint8_t> edges(cls.size());
  std::transform(cls.begin(), cls.end(), edges.begin(),
                 [](std::uint8_t c) -> std::uint8_t { return c == 2; });
  return edges;
}

double edge_density(const ImageBuffer& img, const CannyParams& params) {
  const auto edges = canny_edges(img, params);
  const auto n = std::count(edges.begin(), edges.end(), std::uint8_t{1});
  return static_cast<double>(n) / static_cast<double>(edges.size());
}

EnvAttributes extract_attributes(const ImageBuffer& img, const ExtractOptions& opts) {
  const double light = lighting_score(img);
  const double density = opts.resize_first
                             ? edge_density(resize_bilinear(img, 224, 224), opts.canny)
                             : edge_density(img, opts.canny);
  return make_env(light, density);
}

ExtractResult extract_all(const Manifest& manifest, const ExtractOptions& opts) {
  opts.canny.validate();
  const auto& samples = manifest.samples();
  std::vector<std::optional<EnvAttributes>> env(samples.size());
  std::vector<std::string> errors(samples.size());

  parallel_for(samples.size(), opts.threads, [&](std::size_t i) {
    try {
      env[i] = extract_attributes(read_image(manifest.resolve(samples[i])), opts);
    } catch (const Error& e) {
      if (!opts.skip_errors) {
        throw Error("sample '" + samples[i].id + "': " + e.what());
      }
      errors[i] = e.what();
    }
  });

  ExtractResult result;
  auto out = samples;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].env = env[i];
    if (!env[i]) result.failures.push_back({samples[i].id, errors[i]});
  }
  result.manifest = Manifest(manifest.labels(), std::move(out));
  result.manifest.set_base_dir(manifest.base_dir());
  return result;
}

}  // namespace fairaug
