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

#include <cstdint>
#include <vector>

namespace advbound {

struct FlowArc {
  std::uint32_t from;
  std::uint32_t to;
  std::int64_t capacity;
};

// Source is node 0 and sink is node num_nodes - 1. No arc may enter the
// source or leave the sink.
struct FlowNetwork {
  std::uint32_t num_nodes = 2;
  std::vector<FlowArc> arcs;

  std::uint32_t source() const { return 0; }
  std::uint32_t sink() const { return num_nodes - 1; }

  // 1 + total capacity out of the source: strictly above any feasible flow.
  // Throws kOverflow if that does not fit in 63 bits.
  std::int64_t infinite_capacity() const;

  void validate() const;
};

struct FlowResult {
  std::int64_t value = 0;
  std::vector<std::int64_t> flow;     // per arc, same order as the network
  std::vector<bool> source_reachable;  // residual reachability after the run
};

// Exact maximum flow (Dinic). The reachable set describes the minimum cut
// closest to the source.
FlowResult max_flow(const FlowNetwork& net);

}  // namespace advbound
