#include "fairaug/attribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <tuple>

#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/io.hpp"
#include "fairaug/stats.hpp"

namespace fairaug {

MassSplit mass_split(const SaliencyRaster& raster, const RegionMask& mask) {
  if (raster.height != mask.height || raster.width != mask.width ||
      raster.values.size() != mask.labels.size()) {
    throw ValidationError("saliency raster and mask for '" + raster.sample_id +
                          "' differ in size");
  }
  double by_region[3] = {0, 0, 0};
  double total = 0.0;
  for (std::size_t i = 0; i < raster.values.size(); ++i) {
    const double v = raster.values[i];
    if (!(v >= 0.0)) {
      throw ValidationError("saliency raster '" + raster.sample_id + "' has a negative value");
    }
    by_region[static_cast<int>(mask.labels[i])] += v;
    total += v;
  }
  if (!(total > 0.0)) {
    throw DomainError("saliency raster '" + raster.sample_id + "' has zero total mass");
  }
  return {by_region[1] / total, by_region[0] / total, by_region[2] / total};
}

MassSplit mean_mass_split(std::span<const MassSplit> splits) {
  if (splits.empty()) throw ValidationError("no mass splits to average");
  MassSplit m;
  for (const auto& s : splits) {
    m.object += s.object;
    m.background += s.background;
    m.transition += s.transition;
  }
  const auto n = static_cast<double>(splits.size());
  return {m.object / n, m.background / n, m.transition / n};
}

namespace {

std::vector<double> mean_raster(std::span<const SaliencyRaster> group, int h, int w) {
  std::vector<double> m(static_cast<std::size_t>(h) * w, 0.0);
  for (const auto& r : group) {
    if (r.height != h || r.width != w || r.values.size() != m.size()) {
      throw ValidationError("raster '" + r.sample_id + "' has mismatched dimensions");
    }
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += r.values[i];
  }
  for (auto& v : m) v /= static_cast<double>(group.size());
  return m;
}

}  // namespace

double condition_similarity(std::span<const SaliencyRaster> group_a,
                            std::span<const SaliencyRaster> group_b) {
  if (group_a.empty() || group_b.empty()) {
    throw ValidationError("condition similarity needs two non-empty groups");
  }
  const int h = group_a.front().height, w = group_a.front().width;
  const auto a = mean_raster(group_a, h, w);
  const auto b = mean_raster(group_b, h, w);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw DomainError("mean saliency raster has zero norm");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

EnvShareResult env_attribution_share(const std::vector<std::vector<double>>& attributions,
                                     const std::vector<std::vector<double>>& env_values,
                                     double corr_threshold) {
  const std::size_t n = attributions.size();
  if (n < 3) throw ValidationError("env attribution share needs at least 3 samples");
  if (env_values.size() != n) {
    throw ValidationError("attribution and environment tables differ in sample count");
  }
  const std::size_t k = attributions.front().size();
  const std::size_t m = env_values.front().size();
  if (k == 0 || m == 0) throw ValidationError("empty feature or environment vector");
  for (std::size_t i = 0; i < n; ++i) {
    if (attributions[i].size() != k || env_values[i].size() != m) {
      throw ValidationError("inconsistent feature dimensionality at sample " +
                            std::to_string(i));
    }
  }

  EnvShareResult out;
  std::vector<bool> is_env(k, false);
  std::vector<double> col(n), env_col(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = std::fabs(attributions[i][j]);
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col[0]; })) {
      out.skipped_features.push_back(j);
      continue;
    }
    double best = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t i = 0; i < n; ++i) env_col[i] = env_values[i][a];
      try {
        best = std::max(best, std::fabs(stats::pearson(col, env_col).r));
      } catch (const DomainError&) {
        // constant environment column: no evidence either way
      }
    }
    if (best > corr_threshold) {
      is_env[j] = true;
      out.environmental.push_back(j);
    }
  }

  double share_sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0, env = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = std::fabs(attributions[i][j]);
      total += v;
      if (is_env[j]) env += v;
    }
    if (total == 0.0) {
      out.skipped_samples.push_back(i);
      continue;
    }
    share_sum += env / total;
    ++used;
  }
  out.share = used ? share_sum / static_cast<double>(used) : 0.0;
  return out;
}

namespace {

constexpr char kMagic[4] = {'F', 'A', 'M', 'X'};

bool is_csv(const std::filesystem::path& p) { return p.extension() == ".csv"; }

// Returns (height, width, values).
std::tuple<int, int, std::vector<double>> read_matrix(const std::filesystem::path& path) {
  if (is_csv(path)) {
    const auto rows = csv::read_file(path.string());
    if (rows.empty() || rows[0].size() != 2) {
      throw ParseError(path.string() + ": first line must be 'height,width'");
    }
    const auto h = csv::parse_int(rows[0][0], "height");
    const auto w = csv::parse_int(rows[0][1], "width");
    if (h < 1 || w < 1 || static_cast<long long>(rows.size()) != h + 1) {
      throw ParseError(path.string() + ": row count does not match header");
    }
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(h * w));
    for (long long y = 1; y <= h; ++y) {
      if (static_cast<long long>(rows[y].size()) != w) {
        throw ParseError(path.string() + ": row " + std::to_string(y) + " has wrong width");
      }
      for (const auto& f : rows[y]) v.push_back(csv::parse_double(f, path.string()));
    }
    return {static_cast<int>(h), static_cast<int>(w), std::move(v)};
  }
  const auto bytes = io::read_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw ParseError(path.string() + ": not a binary matrix file");
  }
  auto u32 = [&](std::size_t off) {
    return static_cast<std::uint32_t>(bytes[off]) | (static_cast<std::uint32_t>(bytes[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes[off + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes[off + 3]) << 24);
  };
  const std::uint32_t h = u32(4), w = u32(8);
  const std::size_t count = static_cast<std::size_t>(h) * w;
  if (h == 0 || w == 0 || bytes.size() != 12 + count * 8) {
    throw ParseError(path.string() + ": binary matrix size mismatch");
  }
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[12 + i * 8 + b];
    v[i] = std::bit_cast<double>(bits);
  }
  return {static_cast<int>(h), static_cast<int>(w), std::move(v)};
}

void write_matrix(const std::filesystem::path& path, int h, int w,
                  const std::vector<double>& values) {
  std::string out;
  if (is_csv(path)) {
    out = std::to_string(h) + "," + std::to_string(w) + "\n";
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x) out += ',';
        out += csv::format_double(values[static_cast<std::size_t>(y) * w + x]);
      }
      out += '\n';
    }
  } else {
    out.assign(kMagic, 4);
    auto put32 = [&](std::uint32_t v) {
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
    };
    put32(static_cast<std::uint32_t>(h));
    put32(static_cast<std::uint32_t>(w));
    for (double d : values) {
      const auto bits = std::bit_cast<std::uint64_t>(d);
      for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  io::write_atomic(path, out);
}

}  // namespace

SaliencyRaster read_raster(const std::filesystem::path& path, std::string sample_id) {
  auto [h, w, v] = read_matrix(path);
  for (double x : v) {
    if (!(x >= 0.0)) throw ValidationError(path.string() + ": saliency values must be >= 0");
  }
  return {std::move(sample_id), h, w, std::move(v)};
}

void write_raster(const SaliencyRaster& raster, const std::filesystem::path& path) {
  write_matrix(path, raster.height, raster.width, raster.values);
}

RegionMask read_mask(const std::filesystem::path& path, std::string sample_id) {
  auto [h, w, v] = read_matrix(path);
  RegionMask m{std::move(sample_id), h, w, {}};
  m.labels.reserve(v.size());
  for (double x : v) {
    if (x != 0.0 && x != 1.0 && x != 2.0) {
      throw ValidationError(path.string() + ": mask values must be 0, 1 or 2");
    }
    m.labels.push_back(static_cast<Region>(static_cast<int>(x)));
  }
  return m;
}

void write_mask(const RegionMask& mask, const std::filesystem::path& path) {
  std::vector<double> v(mask.labels.size());
  std::transform(mask.labels.begin(), mask.labels.end(), v.begin(),
                 [](Region r) { return static_cast<double>(r); });
  write_matrix(path, mask.height, mask.width, v);
}

}  // namespace fairaug
