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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "advbound/error.hpp"
#include "support/error_kind.hpp"
#include "support/oracles.hpp"

namespace advbound {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("advbound_dataset_" + name);
}

using testing::kind_of;

TEST(CsvTest, MapsClassPairInOrder) {
  CsvOptions opts;
  opts.class_pair = {{"3", "7"}};
  const auto ds = parse_csv("0.5,1.5,3\n2.0,1.0,7\n", opts);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.label(0), Label::kPlus);
  EXPECT_EQ(ds.label(1), Label::kMinus);
  EXPECT_EQ(ds.count(0), 1u);
  EXPECT_EQ(ds.count(1), 1u);
  EXPECT_EQ(ds.dim(), 2u);
  ASSERT_TRUE(ds.class_names().has_value());
  EXPECT_EQ(ds.class_names()->plus, "3");
}

TEST(CsvTest, MergesIdenticalRows) {
  const auto ds = parse_csv("1,2,1\n1,2,1\n1,2,-1\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.count(0), 2u);
  EXPECT_EQ(ds.count(1), 1u);
  EXPECT_EQ(ds.total_count(), 3u);
}

TEST(CsvTest, DropsRowsOutsideClassPair) {
  std::string text;
  for (int i = 0; i < 3; ++i) text += std::to_string(i) + ",0,3\n";
  for (int i = 0; i < 4; ++i) text += std::to_string(i) + ",1,5\n";
  for (int i = 0; i < 3; ++i) text += std::to_string(i) + ",2,7\n";
  CsvOptions opts;
  opts.class_pair = {{"3", "7"}};
  const auto ds = parse_csv(text, opts);
  EXPECT_LE(ds.size(), 6u);
  EXPECT_EQ(ds.total_count(), 6u);
  EXPECT_EQ(ds.class_count(Label::kPlus), 3u);
}

TEST(CsvTest, HeaderAndLabelColumn) {
  CsvOptions opts;
  opts.label_column = 0;
  const auto ds = parse_csv("label,x,y\n1,0.1,0.2\n-1,0.3,0.4\n", opts);
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.row(1)[1], 0.4);
}

TEST(CsvTest, Errors) {
  EXPECT_EQ(kind_of([] { parse_csv("1,2,1\n1,x,1\n"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { parse_csv("1,2,1\n1,1\n"); }), ErrorKind::kParse);
  EXPECT_EQ(kind_of([] { parse_csv("1,2,4\n"); }), ErrorKind::kParse);
  CsvOptions opts;
  opts.class_pair = {{"3", "7"}};
  EXPECT_EQ(kind_of([&] { parse_csv("1,2,5\n", opts); }), ErrorKind::kEmptyDataset);
  try {
    parse_csv("1,2,1\n1,2,1\nfoo,2,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(CsvTest, SingleClassIsFlagged) {
  const auto ds = parse_csv("1,1\n2,1\n");
  EXPECT_TRUE(ds.single_class());
}

TEST(BinaryTest, RoundTripIsBitwise) {
  std::mt19937_64 rng(3);
  const auto ds = testing::random_points(rng, 7, 5, 3, 4);
  const auto path = temp_file("roundtrip.bin");
  save_binary(ds, path);
  const auto back = load_binary(path);
  EXPECT_EQ(back, ds);
  EXPECT_EQ(encode_binary(back), encode_binary(ds));
  std::filesystem::remove(path);
}

TEST(BinaryTest, LayoutMatchesFormat) {
  const auto ds = LabeledDataset::from_rows(1, {2.0, -1.0}, {Label::kPlus, Label::kMinus}, {3, 1});
  const std::string bytes = encode_binary(ds);
  ASSERT_EQ(bytes.size(), 6u + 8u + 16u + 2u + 8u);
  EXPECT_EQ(bytes.substr(0, 6), std::string("RBND1\0", 6));
  EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 2u);  // n, little-endian
  EXPECT_EQ(static_cast<unsigned char>(bytes[10]), 1u);  // d
  EXPECT_EQ(static_cast<signed char>(bytes[30]), 1);
  EXPECT_EQ(static_cast<signed char>(bytes[31]), -1);
  EXPECT_EQ(static_cast<unsigned char>(bytes[32]), 3u);
}

TEST(BinaryTest, RejectsBadInput) {
  const auto ds = LabeledDataset::from_rows(2, {0, 1, 2, 3}, {Label::kPlus, Label::kMinus}, {1, 1});
  std::string bytes = encode_binary(ds);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { decode_binary(bad_magic); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { decode_binary(bytes.substr(0, 20)); }), ErrorKind::kFormat);
  std::string bad_label = bytes;
  bad_label[6 + 8 + 32] = 2;
  EXPECT_EQ(kind_of([&] { decode_binary(bad_label); }), ErrorKind::kFormat);
  std::string zero_count = bytes;
  zero_count[6 + 8 + 32 + 2] = 0;
  EXPECT_EQ(kind_of([&] { decode_binary(zero_count); }), ErrorKind::kFormat);
  EXPECT_EQ(kind_of([&] { decode_binary(bytes + "x"); }), ErrorKind::kFormat);
}

TEST(DedupTest, IdempotentAndMassPreserving) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coord(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pts;
    std::vector<Label> labels;
    std::vector<std::uint32_t> counts;
    for (int i = 0; i < 30; ++i) {
      pts.push_back(coord(rng));
      pts.push_back(coord(rng));
      labels.push_back(coord(rng) == 0 ? Label::kMinus : Label::kPlus);
      counts.push_back(1 + static_cast<std::uint32_t>(coord(rng)));
    }
    std::uint64_t plus = 0;
    for (int i = 0; i < 30; ++i) plus += labels[i] == Label::kPlus ? counts[i] : 0;
    const auto once = LabeledDataset::from_rows(2, pts, labels, counts);
    EXPECT_EQ(once.class_count(Label::kPlus), plus);
    const auto twice = LabeledDataset::from_rows(
        2, {once.points().begin(), once.points().end()}, {once.labels().begin(), once.labels().end()},
        {once.counts().begin(), once.counts().end()});
    EXPECT_EQ(once, twice);
  }
}

TEST(DedupTest, BitwiseEqualityOnly) {
  // -0.0 and 0.0 differ bitwise and stay separate vertices.
  const auto ds = LabeledDataset::from_rows(1, {0.0, -0.0}, {Label::kPlus, Label::kPlus}, {1, 1});
  EXPECT_EQ(ds.size(), 2u);
}

TEST(SubsampleTest, FullCountsGiveOriginal) {
  const auto balanced = LabeledDataset::from_rows(1, {0, 1, 2, 3}, {Label::kPlus, Label::kPlus, Label::kMinus, Label::kMinus}, {2, 1, 1, 2});
  EXPECT_EQ(subsample(balanced, 3, 42), balanced);
}

TEST(SubsampleTest, DeterministicAndExactMass) {
  const auto ds = LabeledDataset::from_rows(1, {0, 1, 5, 6}, {Label::kPlus, Label::kPlus, Label::kMinus, Label::kMinus},
                                            {3, 1, 2, 2});
  const auto a = subsample(ds, 2, 1);
  const auto b = subsample(ds, 2, 1);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.class_count(Label::kPlus), 2u);
  EXPECT_EQ(a.class_count(Label::kMinus), 2u);
}

TEST(SubsampleTest, NestedInK) {
  std::mt19937_64 rng(8);
  const auto ds = testing::random_points(rng, 40, 40, 2, 3);
  const auto small = subsample(ds, 10, 77);
  const auto large = subsample(ds, 25, 77);
  // Every unit of the small sample appears in the large one.
  for (std::size_t i = 0; i < small.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < large.size(); ++j) {
      if (large.label(j) == small.label(i) && large.row(j)[0] == small.row(i)[0] &&
          large.row(j)[1] == small.row(i)[1]) {
        EXPECT_GE(large.count(j), small.count(i));
        found = true;
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(SubsampleTest, InsufficientMass) {
  const auto ds = LabeledDataset::from_rows(1, {0, 1}, {Label::kPlus, Label::kMinus}, {1, 1});
  EXPECT_EQ(kind_of([&] { subsample(ds, 2, 0); }), ErrorKind::kCapacity);
}

}  // namespace
}  // namespace advbound
