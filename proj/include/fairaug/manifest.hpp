#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairaug/environment.hpp"

namespace fairaug {

enum class Split { train, val, test };

std::string_view to_string(Split s);
Split parse_split(std::string_view s);

struct SampleRecord {
  std::string id;
  std::string image_path;  // as written in the manifest; see Manifest::resolve
  std::string class_label;
  Split split = Split::train;
  std::optional<EnvAttributes> env;
  // Set on augmented records: id of the sample this one was derived from.
  std::optional<std::string> source_id;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

class Manifest {
 public:
  Manifest() = default;
  // Validates: at least two labels, unique ids, every class_label declared.
  Manifest(std::vector<std::string> labels, std::vector<SampleRecord> samples);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<SampleRecord>& samples() const { return samples_; }
  std::size_t num_classes() const { return labels_.size(); }
  std::size_t size() const { return samples_.size(); }

  // Index of a label in labels(); throws ValidationError if undeclared.
  std::size_t class_index(std::string_view label) const;
  const SampleRecord* find(std::string_view id) const;

  std::size_t count(Split s) const;
  // n_y for the split, in label order.
  std::vector<std::size_t> class_counts(Split s) const;
  std::vector<const SampleRecord*> in_split(Split s) const;

  // Directory that relative image paths are resolved against.
  const std::filesystem::path& base_dir() const { return base_dir_; }
  void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }
  std::filesystem::path resolve(const SampleRecord& s) const;

  // Equality is over labels and samples; base_dir is a load-time detail.
  friend bool operator==(const Manifest& a, const Manifest& b) {
    return a.labels_ == b.labels_ && a.samples_ == b.samples_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<SampleRecord> samples_;
  std::map<std::string, std::size_t, std::less<>> label_index_;
  std::map<std::string, std::size_t, std::less<>> id_index_;
  std::filesystem::path base_dir_;
};

// Label-order sidecar written next to a manifest: "<manifest>.labels",
// one label per line. When present it declares the label set and pins
// index order; otherwise labels are the sorted distinct class values.
std::filesystem::path labels_sidecar(const std::filesystem::path& manifest_path);

// Reads the headered CSV (id,path,class,split[,lighting_score,bg_complexity,
// lighting_cat,bg_cat][,source_id]). Column order in the file is free.
Manifest load_manifest(const std::filesystem::path& path);
Manifest parse_manifest(std::string_view csv_text,
                        std::optional<std::vector<std::string>> labels = std::nullopt);

// Writes the CSV plus the label sidecar. Env columns appear when any
// sample carries attributes; source_id when any sample has provenance.
void write_manifest(const Manifest& m, const std::filesystem::path& path);
std::string format_manifest(const Manifest& m);

}  // namespace fairaug
