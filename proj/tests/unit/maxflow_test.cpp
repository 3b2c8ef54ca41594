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

#include "advbound/maxflow.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/error_kind.hpp"
#include "support/oracles.hpp"

namespace advbound {
namespace {

using testing::kind_of;

FlowNetwork random_network(std::mt19937_64& rng, std::uint32_t internal, double density,
                           std::int64_t max_cap) {
  FlowNetwork net;
  net.num_nodes = internal + 2;
  std::bernoulli_distribution coin(density);
  std::uniform_int_distribution<std::int64_t> cap(0, max_cap);
  for (std::uint32_t u = 0; u + 1 < net.num_nodes; ++u) {
    for (std::uint32_t v = 1; v < net.num_nodes; ++v) {
      if (u != v && coin(rng)) net.arcs.push_back({u, v, cap(rng)});
    }
  }
  return net;
}

TEST(MaxFlowTest, SinglePath) {
  FlowNetwork net{3, {{0, 1, 1}, {1, 2, 1}}};
  EXPECT_EQ(max_flow(net).value, 1);
}

TEST(MaxFlowTest, TwoParallelPaths) {
  FlowNetwork net{4, {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 1}}};
  const auto r = max_flow(net);
  EXPECT_EQ(r.value, 2);
  for (auto f : r.flow) EXPECT_EQ(f, 1);
}

TEST(MaxFlowTest, NoPath) {
  FlowNetwork net{4, {{0, 1, 5}, {2, 3, 5}}};
  const auto r = max_flow(net);
  EXPECT_EQ(r.value, 0);
  EXPECT_TRUE(r.source_reachable[1]);
  EXPECT_FALSE(r.source_reachable[2]);
}

TEST(MaxFlowTest, RandomAgreesWithOracles) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint32_t internal = 1 + trial % 10;
    const auto net = random_network(rng, internal, 0.45, 9);
    const auto r = max_flow(net);
    EXPECT_EQ(r.value, testing::brute_force_min_cut(net)) << "trial " << trial;
    EXPECT_EQ(r.value, testing::edmonds_karp_value(net)) << "trial " << trial;
  }
}

TEST(MaxFlowTest, FlowIsFeasibleAndCutIsSaturated) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = random_network(rng, 12, 0.3, 20);
    const auto r = max_flow(net);
    std::vector<std::int64_t> balance(net.num_nodes, 0);
    std::int64_t cut = 0;
    for (std::size_t i = 0; i < net.arcs.size(); ++i) {
      const auto& arc = net.arcs[i];
      ASSERT_GE(r.flow[i], 0);
      ASSERT_LE(r.flow[i], arc.capacity);
      balance[arc.from] -= r.flow[i];
      balance[arc.to] += r.flow[i];
      const bool crosses = r.source_reachable[arc.from] && !r.source_reachable[arc.to];
      if (crosses) {
        EXPECT_EQ(r.flow[i], arc.capacity);
        cut += arc.capacity;
      }
      if (!r.source_reachable[arc.from] && r.source_reachable[arc.to]) EXPECT_EQ(r.flow[i], 0);
    }
    for (std::uint32_t v = 1; v + 1 < net.num_nodes; ++v) EXPECT_EQ(balance[v], 0);
    EXPECT_EQ(balance[net.sink()], r.value);
    EXPECT_EQ(cut, r.value);
    EXPECT_TRUE(r.source_reachable[net.source()]);
    EXPECT_FALSE(r.source_reachable[net.sink()]);
  }
}

TEST(MaxFlowTest, Deterministic) {
  std::mt19937_64 rng(23);
  const auto net = random_network(rng, 30, 0.2, 50);
  const auto a = max_flow(net);
  const auto b = max_flow(net);
  EXPECT_EQ(a.flow, b.flow);
  EXPECT_EQ(a.source_reachable, b.source_reachable);
}

TEST(MaxFlowTest, RejectsMalformedNetworks) {
  EXPECT_EQ(kind_of([] { max_flow(FlowNetwork{3, {{1, 0, 1}}}); }), ErrorKind::kUsage);
  EXPECT_EQ(kind_of([] { max_flow(FlowNetwork{3, {{2, 1, 1}}}); }), ErrorKind::kUsage);
  EXPECT_EQ(kind_of([] { max_flow(FlowNetwork{3, {{0, 1, -1}}}); }), ErrorKind::kUsage);
  EXPECT_EQ(kind_of([] { max_flow(FlowNetwork{3, {{0, 7, 1}}}); }), ErrorKind::kUsage);
  const std::int64_t big = INT64_MAX / 2 + 1;
  FlowNetwork overflow{3, {{0, 1, big}, {0, 1, big}, {1, 2, 1}}};
  EXPECT_EQ(kind_of([&] { max_flow(overflow); }), ErrorKind::kOverflow);
}

}  // namespace
}  // namespace advbound
