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

#include "advbound/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "advbound/error.hpp"
#include "advbound/random.hpp"

namespace advbound {
namespace {

constexpr char kMagic[6] = {'R', 'B', 'N', 'D', '1', '\0'};

std::string row_key(Label label, std::span<const double> row) {
  std::string key(1 + row.size() * sizeof(double), '\0');
  key[0] = static_cast<char>(label);
  if (!row.empty()) std::memcpy(key.data() + 1, row.data(), row.size_bytes());
  return key;
}

void check_shapes(std::size_t dim, std::size_t n_points, std::size_t n_labels,
                  std::size_t n_counts) {
  if (n_labels != n_counts || n_points != n_labels * dim) {
    fail(ErrorKind::kDimension, "points, labels and counts disagree in length");
  }
  if (n_labels == 0) fail(ErrorKind::kEmptyDataset, "dataset has no rows");
  if (dim == 0) fail(ErrorKind::kDimension, "dataset has zero features");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool same_label(std::string_view raw, const std::string& wanted) {
  const auto a = parse_number(raw);
  const auto b = parse_number(wanted);
  if (a && b) return *a == *b;
  return trim(raw) == trim(std::string_view(wanted));
}

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      fail(ErrorKind::kFormat, std::string("truncated payload while reading ") + what);
    }
  }

  template <typename T>
  T get_le(const char* what) {
    need(sizeof(T), what);
    std::make_unsigned_t<T> v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::make_unsigned_t<T>>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

LabeledDataset LabeledDataset::from_rows(std::size_t dim,
                                         std::vector<double> points,
                                         std::vector<Label> labels,
                                         std::vector<std::uint32_t> counts,
                                         std::optional<ClassNames> names) {
  check_shapes(dim, points.size(), labels.size(), counts.size());
  LabeledDataset ds;
  ds.dim_ = dim;
  ds.names_ = std::move(names);
  std::unordered_map<std::string, std::size_t> seen;
  seen.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Label::kPlus && labels[i] != Label::kMinus) {
      fail(ErrorKind::kFormat, "label must be +1 or -1");
    }
    if (counts[i] == 0) fail(ErrorKind::kFormat, "row count must be positive");
    std::span<const double> row(points.data() + i * dim, dim);
    auto [it, inserted] = seen.try_emplace(row_key(labels[i], row), ds.labels_.size());
    if (inserted) {
      ds.points_.insert(ds.points_.end(), row.begin(), row.end());
      ds.labels_.push_back(labels[i]);
      ds.counts_.push_back(counts[i]);
    } else {
      const std::uint64_t merged =
          static_cast<std::uint64_t>(ds.counts_[it->second]) + counts[i];
      if (merged > UINT32_MAX) fail(ErrorKind::kOverflow, "row multiplicity exceeds 2^32-1");
      ds.counts_[it->second] = static_cast<std::uint32_t>(merged);
    }
    ds.total_ += counts[i];
  }
  return ds;
}

LabeledDataset LabeledDataset::from_canonical(std::size_t dim,
                                              std::vector<double> points,
                                              std::vector<Label> labels,
                                              std::vector<std::uint32_t> counts) {
  const std::size_t n = labels.size();
  LabeledDataset ds = from_rows(dim, std::move(points), std::move(labels),
                                std::move(counts));
  if (ds.size() != n) fail(ErrorKind::kFormat, "duplicate rows in canonical dataset");
  return ds;
}

std::uint64_t LabeledDataset::class_count(Label label) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) total += counts_[i];
  }
  return total;
}

bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.dim_ != b.dim_ || a.labels_ != b.labels_ || a.counts_ != b.counts_) {
    return false;
  }
  // Bitwise, so that -0.0 != 0.0 and NaN payloads compare like dedup does.
  return a.points_.size() == b.points_.size() &&
         std::memcmp(a.points_.data(), b.points_.data(),
                     a.points_.size() * sizeof(double)) == 0;
}

LabeledDataset parse_csv(std::string_view text, const CsvOptions& options) {
  std::size_t n_fields = 0;
  std::size_t label_col = 0;
  bool first_row = true;
  std::vector<double> points;
  std::vector<Label> labels;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto fields = split_fields(line);
    if (first_row) {
      n_fields = fields.size();
      if (n_fields < 2) {
        fail(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                    ": need at least one feature and a label");
      }
      const int col = options.label_column < 0
                          ? static_cast<int>(n_fields) + options.label_column
                          : options.label_column;
      if (col < 0 || col >= static_cast<int>(n_fields)) {
        fail(ErrorKind::kUsage, "label column out of range");
      }
      label_col = static_cast<std::size_t>(col);
    }
    if (fields.size() != n_fields) {
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n_fields) + " fields, got " +
                                  std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(n_fields - 1);
    bool numeric = true;
    for (std::size_t j = 0; j < n_fields && numeric; ++j) {
      if (j == label_col) continue;
      const auto v = parse_number(fields[j]);
      if (!v || !std::isfinite(*v)) {
        numeric = false;
      } else {
        row.push_back(*v);
      }
    }
    if (!numeric) {
      if (first_row) {  // header
        first_row = false;
        if (end == text.size()) break;
        continue;
      }
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": non-numeric feature");
    }
    first_row = false;

    const std::string_view raw = fields[label_col];
    Label label;
    if (options.class_pair) {
      if (same_label(raw, options.class_pair->first)) {
        label = Label::kPlus;
      } else if (same_label(raw, options.class_pair->second)) {
        label = Label::kMinus;
      } else {
        if (end == text.size()) break;
        continue;
      }
    } else {
      const auto v = parse_number(raw);
      if (v && *v == 1.0) {
        label = Label::kPlus;
      } else if (v && *v == -1.0) {
        label = Label::kMinus;
      } else {
        fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": label '" +
                                    std::string(raw) +
                                    "' is not +1/-1 (pass a class pair to map raw labels)");
      }
    }
    points.insert(points.end(), row.begin(), row.end());
    labels.push_back(label);
    if (end == text.size()) break;
  }
  if (labels.empty()) fail(ErrorKind::kEmptyDataset, "no rows left after filtering");
  std::optional<LabeledDataset::ClassNames> names;
  if (options.class_pair) {
    names = LabeledDataset::ClassNames{options.class_pair->first, options.class_pair->second};
  } else {
    names = LabeledDataset::ClassNames{"1", "-1"};
  }
  std::vector<std::uint32_t> counts(labels.size(), 1);
  return LabeledDataset::from_rows(n_fields - 1, std::move(points), std::move(labels),
                                   std::move(counts), std::move(names));
}

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kUsage, "cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, options);
}

std::string encode_binary(const LabeledDataset& ds) {
  if (ds.size() > UINT32_MAX || ds.dim() > UINT32_MAX) {
    fail(ErrorKind::kOverflow, "dataset too large for the binary format");
  }
  std::string out(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ds.dim()));
  for (double x : ds.points()) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    put_le<std::uint64_t>(out, bits);
  }
  for (Label l : ds.labels()) out.push_back(static_cast<char>(l));
  for (std::uint32_t c : ds.counts()) put_le<std::uint32_t>(out, c);
  return out;
}

LabeledDataset decode_binary(std::string_view bytes) {
  ByteReader reader(bytes);
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorKind::kFormat, "bad magic (expected RBND1)");
  }
  reader.take(sizeof(kMagic), "magic");
  const auto n = reader.get_le<std::uint32_t>("row count");
  const auto d = reader.get_le<std::uint32_t>("dimension");
  const std::uint64_t n_values = static_cast<std::uint64_t>(n) * d;
  reader.need(n_values * 8, "coordinates");
  std::vector<double> points(n_values);
  for (auto& x : points) {
    const auto bits = reader.get_le<std::uint64_t>("coordinates");
    std::memcpy(&x, &bits, sizeof(x));
  }
  const auto raw_labels = reader.take(n, "labels");
  std::vector<Label> labels(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::int8_t>(raw_labels[i]);
    if (v != 1 && v != -1) fail(ErrorKind::kFormat, "label byte is not +1/-1");
    labels[i] = static_cast<Label>(v);
  }
  std::vector<std::uint32_t> counts(n);
  for (auto& c : counts) {
    c = reader.get_le<std::uint32_t>("counts");
    if (c == 0) fail(ErrorKind::kFormat, "zero count in binary dataset");
  }
  if (!reader.done()) fail(ErrorKind::kFormat, "trailing bytes after counts");
  return LabeledDataset::from_canonical(d, std::move(points), std::move(labels),
                                        std::move(counts));
}

void save_binary(const LabeledDataset& ds, const std::filesystem::path& path) {
  const std::string bytes = encode_binary(ds);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kUsage, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kUsage, "write failed for " + path.string());
}

LabeledDataset load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kUsage, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_binary(bytes);
}

LabeledDataset subsample(const LabeledDataset& ds, std::uint64_t k_per_class,
                         std::uint64_t seed) {
  if (k_per_class == 0) fail(ErrorKind::kUsage, "k_per_class must be positive");
  std::vector<std::uint32_t> drawn(ds.size(), 0);
  const Label classes[2] = {Label::kPlus, Label::kMinus};
  for (std::uint64_t stream = 0; stream < 2; ++stream) {
    const Label cls = classes[stream];
    std::vector<std::uint32_t> units;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.label(i) == cls) units.insert(units.end(), ds.count(i), static_cast<std::uint32_t>(i));
    }
    if (units.size() < k_per_class) {
      fail(ErrorKind::kCapacity, "class " + std::to_string(label_value(cls)) + " has " +
                                     std::to_string(units.size()) + " samples, need " +
                                     std::to_string(k_per_class));
    }
    // Forward partial Fisher-Yates: the first k slots only depend on the
    // first k draws, which makes samples nested in k.
    auto rng = make_rng(seed, stream);
    for (std::uint64_t i = 0; i < k_per_class; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, units.size() - 1);
      std::swap(units[i], units[pick(rng)]);
      ++drawn[units[i]];
    }
  }
  std::vector<double> points;
  std::vector<Label> labels;
  std::vector<std::uint32_t> counts;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (drawn[i] == 0) continue;
    const auto row = ds.row(i);
    points.insert(points.end(), row.begin(), row.end());
    labels.push_back(ds.label(i));
    counts.push_back(drawn[i]);
  }
  return LabeledDataset::from_rows(ds.dim(), std::move(points), std::move(labels),
                                   std::move(counts), ds.class_names());
}

}  // namespace advbound
