#include "fairaug/manifest.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fairaug/csv.hpp"
#include "fairaug/error.hpp"
#include "fairaug/io.hpp"

namespace fairaug {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split '" + std::string(s) + "'");
}

Manifest::Manifest(std::vector<std::string> labels, std::vector<SampleRecord> samples)
    : labels_(std::move(labels)), samples_(std::move(samples)) {
  if (labels_.empty()) throw ValidationError("empty label set");
  if (labels_.size() < 2) {
    throw ValidationError("label set needs at least 2 classes, got '" + labels_[0] + "'");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw ValidationError("empty class label");
    if (labels_[i].find_first_of("\r\n") != std::string::npos) {
      throw ValidationError("class label contains a line break");
    }
    if (!label_index_.emplace(labels_[i], i).second) {
      throw ValidationError("duplicate label '" + labels_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.id.empty()) throw ValidationError("sample with empty id");
    if (!id_index_.emplace(s.id, i).second) {
      throw ValidationError("duplicate sample id '" + s.id + "'");
    }
    if (!label_index_.contains(s.class_label)) {
      throw ValidationError("sample '" + s.id + "' has undeclared class '" +
                            s.class_label + "'");
    }
  }
}

std::size_t Manifest::class_index(std::string_view label) const {
  auto it = label_index_.find(label);
  if (it == label_index_.end()) {
    throw ValidationError("unknown class '" + std::string(label) + "'");
  }
  return it->second;
}

const SampleRecord* Manifest::find(std::string_view id) const {
  auto it = id_index_.find(id);
  return it == id_index_.end() ? nullptr : &samples_[it->second];
}

std::size_t Manifest::count(Split s) const {
  return static_cast<std::size_t>(std::count_if(
      samples_.begin(), samples_.end(), [s](const auto& r) { return r.split == s; }));
}

std::vector<std::size_t> Manifest::class_counts(Split s) const {
  std::vector<std::size_t> n(labels_.size(), 0);
  for (const auto& r : samples_) {
    if (r.split == s) ++n[label_index_.find(r.class_label)->second];
  }
  return n;
}

std::vector<const SampleRecord*> Manifest::in_split(Split s) const {
  std::vector<const SampleRecord*> out;
  for (const auto& r : samples_) {
    if (r.split == s) out.push_back(&r);
  }
  return out;
}

std::filesystem::path Manifest::resolve(const SampleRecord& s) const {
  std::filesystem::path p(s.image_path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

std::filesystem::path labels_sidecar(const std::filesystem::path& manifest_path) {
  auto p = manifest_path;
  p += ".labels";
  return p;
}

namespace {

constexpr const char* kRequired[] = {"id", "path", "class", "split"};
constexpr const char* kEnvColumns[] = {"lighting_score", "bg_complexity", "lighting_cat",
                                       "bg_cat"};

std::optional<EnvAttributes> parse_env(const std::string& id, const std::string* f[4]) {
  int present = 0;
  for (int k = 0; k < 4; ++k) present += f[k] && !f[k]->empty();
  if (present == 0) return std::nullopt;
  if (present != 4) {
    throw ValidationError("sample '" + id + "' has partially filled env columns");
  }
  EnvAttributes e;
  e.lighting_score = csv::parse_double(*f[0], "lighting_score");
  e.bg_complexity = csv::parse_double(*f[1], "bg_complexity");
  e.lighting_cat = parse_lighting_cat(*f[2]);
  e.bg_cat = parse_background_cat(*f[3]);
  if (!(e.lighting_score >= 0.0 && e.lighting_score <= 255.0) ||
      !(e.bg_complexity >= 0.0 && e.bg_complexity <= 1.0)) {
    throw ValidationError("sample '" + id + "' has env scores out of range");
  }
  auto [l, b] = categorize(e.lighting_score, e.bg_complexity);
  if (l != e.lighting_cat || b != e.bg_cat) {
    throw ValidationError("sample '" + id + "' has env categories inconsistent with scores");
  }
  return e;
}

}  // namespace

Manifest parse_manifest(std::string_view csv_text,
                        std::optional<std::vector<std::string>> labels) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) {
    if (labels && !labels->empty()) return Manifest(std::move(*labels), {});
    throw ValidationError("empty label set");
  }

  const auto& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col.emplace(header[i], i).second) {
      throw ParseError("duplicate column '" + header[i] + "'");
    }
  }
  for (const char* name : kRequired) {
    if (!col.contains(name)) throw ParseError(std::string("missing column '") + name + "'");
  }
  auto index_of = [&](const char* name) -> std::optional<std::size_t> {
    auto it = col.find(name);
    return it == col.end() ? std::nullopt : std::optional(it->second);
  };
  std::optional<std::size_t> env_idx[4];
  for (int k = 0; k < 4; ++k) env_idx[k] = index_of(kEnvColumns[k]);
  const auto source_idx = index_of("source_id");

  std::vector<SampleRecord> samples;
  samples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("manifest row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(row.size()));
    }
    SampleRecord s;
    s.id = row[col["id"]];
    s.image_path = row[col["path"]];
    s.class_label = row[col["class"]];
    s.split = parse_split(row[col["split"]]);
    const std::string* env_fields[4];
    for (int k = 0; k < 4; ++k) env_fields[k] = env_idx[k] ? &row[*env_idx[k]] : nullptr;
    s.env = parse_env(s.id, env_fields);
    if (source_idx && !row[*source_idx].empty()) s.source_id = row[*source_idx];
    samples.push_back(std::move(s));
  }

  if (!labels) {
    std::set<std::string> distinct;
    for (const auto& s : samples) distinct.insert(s.class_label);
    labels.emplace(distinct.begin(), distinct.end());
  }
  return Manifest(std::move(*labels), std::move(samples));
}

Manifest load_manifest(const std::filesystem::path& path) {
  const auto text = io::read_text(path);
  std::optional<std::vector<std::string>> labels;
  const auto sidecar = labels_sidecar(path);
  if (std::filesystem::exists(sidecar)) {
    std::istringstream in(io::read_text(sidecar));
    std::vector<std::string> l;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) l.push_back(line);
    }
    labels = std::move(l);
  }
  auto m = parse_manifest(text, std::move(labels));
  m.set_base_dir(path.parent_path());
  return m;
}

std::string format_manifest(const Manifest& m) {
  const auto& samples = m.samples();
  const bool with_env = std::any_of(samples.begin(), samples.end(),
                                    [](const auto& s) { return s.env.has_value(); });
  const bool with_source = std::any_of(samples.begin(), samples.end(),
                                       [](const auto& s) { return s.source_id.has_value(); });
  std::ostringstream out;
  csv::Row header{"id", "path", "class", "split"};
  if (with_env) header.insert(header.end(), std::begin(kEnvColumns), std::end(kEnvColumns));
  if (with_source) header.push_back("source_id");
  csv::write_row(out, header);
  for (const auto& s : samples) {
    csv::Row row{s.id, s.image_path, s.class_label, std::string(to_string(s.split))};
    if (with_env) {
      if (s.env) {
        row.push_back(csv::format_double(s.env->lighting_score));
        row.push_back(csv::format_double(s.env->bg_complexity));
        row.emplace_back(to_string(s.env->lighting_cat));
        row.emplace_back(to_string(s.env->bg_cat));
      } else {
        row.insert(row.end(), 4, std::string());
      }
    }
    if (with_source) row.push_back(s.source_id.value_or(""));
    csv::write_row(out, row);
  }
  return out.str();
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
  std::string labels;
  for (const auto& l : m.labels()) labels += l + "\n";
  io::write_atomic(labels_sidecar(path), labels);
  const auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  if (m.base_dir().empty() || std::filesystem::weakly_canonical(m.base_dir()) ==
                                  std::filesystem::weakly_canonical(dir)) {
    io::write_atomic(path, format_manifest(m));
    return;
  }
  // Relative image paths must keep resolving from the new location.
  auto samples = m.samples();
  for (auto& s : samples) {
    if (!std::filesystem::path(s.image_path).is_absolute()) {
      s.image_path = io::relative_path(m.resolve(s), dir);
    }
  }
  io::write_atomic(path, format_manifest(Manifest(m.labels(), std::move(samples))));
}

}  // namespace fairaug
