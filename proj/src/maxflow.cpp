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

#include <string>

#include "advbound/detail/dinic.hpp"
#include "advbound/error.hpp"

namespace advbound {

std::int64_t FlowNetwork::infinite_capacity() const {
  __int128 total = 1;
  for (const auto& arc : arcs) {
    if (arc.from == source()) total += arc.capacity;
  }
  if (total > INT64_MAX) fail(ErrorKind::kOverflow, "source capacity exceeds 63 bits");
  return static_cast<std::int64_t>(total);
}

void FlowNetwork::validate() const {
  if (num_nodes < 2) fail(ErrorKind::kUsage, "flow network needs a source and a sink");
  __int128 out_of_source = 0;
  __int128 into_sink = 0;
  for (const auto& arc : arcs) {
    if (arc.from >= num_nodes || arc.to >= num_nodes) {
      fail(ErrorKind::kUsage, "arc endpoint out of range");
    }
    if (arc.to == source()) fail(ErrorKind::kUsage, "arc into the source");
    if (arc.from == sink()) fail(ErrorKind::kUsage, "arc out of the sink");
    if (arc.capacity < 0) fail(ErrorKind::kUsage, "negative capacity");
    if (arc.from == source()) out_of_source += arc.capacity;
    if (arc.to == sink()) into_sink += arc.capacity;
  }
  // Flow value and every residual stay below these sums.
  if (out_of_source > INT64_MAX || into_sink > INT64_MAX) {
    fail(ErrorKind::kOverflow, "total terminal capacity exceeds 63 bits");
  }
}

FlowResult max_flow(const FlowNetwork& net) {
  net.validate();
  const std::size_t m = net.arcs.size();
  std::vector<std::uint32_t> from(m), to(m);
  std::vector<std::int64_t> cap(m);
  for (std::size_t i = 0; i < m; ++i) {
    from[i] = net.arcs[i].from;
    to[i] = net.arcs[i].to;
    cap[i] = net.arcs[i].capacity;
  }
  detail::Dinic<std::int64_t> dinic(net.num_nodes, from, to, cap);
  FlowResult result;
  result.value = dinic.solve(net.source(), net.sink(), 0);
  result.flow.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.flow[i] = dinic.flow(i);
  result.source_reachable = dinic.reachable_from(net.source(), 0);
  return result;
}

}  // namespace advbound
