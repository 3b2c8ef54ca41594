// Copyright 2026 The advbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace advbound {

enum class Label : std::int8_t { kPlus = 1, kMinus = -1 };

inline int label_value(Label label) { return static_cast<int>(label); }

// Weighted two-class point cloud in canonical (deduplicated) form: no two
// rows share both label and bitwise-identical coordinates. Immutable once
// built.
class LabeledDataset {
 public:
  // Raw label values the two classes came from, when known.
  struct ClassNames {
    std::string plus;
    std::string minus;
  };

  LabeledDataset() = default;

  // Merges duplicate rows (summing their counts) and validates the result.
  // Rows keep the order of their first occurrence.
  static LabeledDataset from_rows(std::size_t dim, std::vector<double> points,
                                  std::vector<Label> labels,
                                  std::vector<std::uint32_t> counts,
                                  std::optional<ClassNames> names = {});

  // Builds from rows that must already be canonical; throws kFormat if a
  // duplicate row or an invalid count shows up.
  static LabeledDataset from_canonical(std::size_t dim,
                                       std::vector<double> points,
                                       std::vector<Label> labels,
                                       std::vector<std::uint32_t> counts);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> row(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  std::span<const double> points() const { return points_; }
  std::span<const Label> labels() const { return labels_; }
  std::span<const std::uint32_t> counts() const { return counts_; }
  Label label(std::size_t i) const { return labels_[i]; }
  std::uint32_t count(std::size_t i) const { return counts_[i]; }

  std::uint64_t total_count() const { return total_; }
  std::uint64_t class_count(Label label) const;
  // True when only one of the two classes is present.
  bool single_class() const {
    return class_count(Label::kPlus) == 0 || class_count(Label::kMinus) == 0;
  }

  const std::optional<ClassNames>& class_names() const { return names_; }

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b);

 private:
  std::size_t dim_ = 0;
  std::vector<double> points_;
  std::vector<Label> labels_;
  std::vector<std::uint32_t> counts_;
  std::uint64_t total_ = 0;
  std::optional<ClassNames> names_;
};

struct CsvOptions {
  // Column holding the label; negative values count from the end.
  int label_column = -1;
  // Raw label values mapped to (+1, -1). Rows with any other label are
  // dropped. Without a pair, labels must already be +1 / -1.
  std::optional<std::pair<std::string, std::string>> class_pair;
};

LabeledDataset load_csv(const std::filesystem::path& path,
                        const CsvOptions& options = {});
LabeledDataset parse_csv(std::string_view text, const CsvOptions& options = {});

// Little-endian layout: "RBND1\0", u32 n, u32 d, n*d f64 row-major,
// n i8 labels, n u32 counts.
void save_binary(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset load_binary(const std::filesystem::path& path);
std::string encode_binary(const LabeledDataset& ds);
LabeledDataset decode_binary(std::string_view bytes);

// Draws k_per_class unit samples per class without replacement from the
// multiset expansion of the counts, then re-deduplicates. Deterministic in
// seed, and prefix-nested: for a fixed seed the sample for k is contained in
// the sample for any k' > k.
LabeledDataset subsample(const LabeledDataset& ds, std::uint64_t k_per_class,
                         std::uint64_t seed);

}  // namespace advbound
