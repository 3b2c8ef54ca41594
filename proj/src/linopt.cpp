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

#include "advbound/linopt.hpp"

#include <algorithm>
#include <numeric>

#include "advbound/error.hpp"
#include "advbound/maxflow.hpp"

namespace advbound {
namespace {

std::uint32_t local_index(const std::vector<std::uint32_t>& sorted, std::uint32_t pos) {
  return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), pos) -
                                    sorted.begin());
}

}  // namespace

SubProblem SubProblem::whole(const ConflictGraph& g) {
  SubProblem sub;
  sub.graph = &g;
  sub.a.resize(g.a_vertices.size());
  sub.b.resize(g.b_vertices.size());
  std::iota(sub.a.begin(), sub.a.end(), 0u);
  std::iota(sub.b.begin(), sub.b.end(), 0u);
  sub.edges.resize(g.edges.size());
  std::iota(sub.edges.begin(), sub.edges.end(), 0u);
  sub.mass_a = g.mass_a();
  sub.mass_b = g.mass_b();
  return sub;
}

SubProblem SubProblem::induced(const ConflictGraph& g, std::vector<std::uint32_t> a,
                               std::vector<std::uint32_t> b,
                               const std::vector<std::uint32_t>& parent_edges) {
  SubProblem sub;
  sub.graph = &g;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  sub.a = std::move(a);
  sub.b = std::move(b);
  for (auto p : sub.a) sub.mass_a += g.a_vertices[p].count;
  for (auto p : sub.b) sub.mass_b += g.b_vertices[p].count;
  for (auto id : parent_edges) {
    const Edge& e = g.edges[id];
    if (std::binary_search(sub.a.begin(), sub.a.end(), e.a) &&
        std::binary_search(sub.b.begin(), sub.b.end(), e.b)) {
      sub.edges.push_back(id);
    }
  }
  return sub;
}

std::int64_t LinOptResult::independent_set_weight() const {
  __int128 total = 0;
  for (auto w : scaled_weights) total += w;
  return static_cast<std::int64_t>(total - flow_value);
}

LinOptResult lin_opt(const SubProblem& sub) {
  if (sub.graph == nullptr) fail(ErrorKind::kUsage, "subproblem without a graph");
  const ConflictGraph& g = *sub.graph;
  const std::uint64_t ca = sub.mass_a;
  const std::uint64_t cb = sub.mass_b;
  if (ca + cb == 0) fail(ErrorKind::kUsage, "lin_opt on an empty subproblem");
  const std::uint64_t n_total = g.total_count;
  if (n_total > ConflictGraph::kMaxTotalCount) g.validate();

  const bool both = ca > 0 && cb > 0;
  const auto na = static_cast<std::uint32_t>(sub.a.size());
  const auto nb = static_cast<std::uint32_t>(sub.b.size());

  LinOptResult out;
  out.scaled_weights.reserve(na + nb);
  for (auto p : sub.a) {
    const std::uint64_t c = g.a_vertices[p].count;
    out.scaled_weights.push_back(static_cast<std::int64_t>(both ? c * cb : c));
  }
  for (auto p : sub.b) {
    const std::uint64_t c = g.b_vertices[p].count;
    out.scaled_weights.push_back(static_cast<std::int64_t>(both ? c * ca : c));
  }

  FlowNetwork net;
  net.num_nodes = na + nb + 2;
  const std::uint32_t sink = net.num_nodes - 1;
  net.arcs.reserve(na + nb + sub.edges.size());
  for (std::uint32_t i = 0; i < na; ++i) net.arcs.push_back({0, 1 + i, out.scaled_weights[i]});
  for (std::uint32_t j = 0; j < nb; ++j) {
    net.arcs.push_back({1 + na + j, sink, out.scaled_weights[na + j]});
  }
  const std::int64_t inf = net.infinite_capacity();
  for (auto id : sub.edges) {
    const Edge& e = g.edges[id];
    net.arcs.push_back({1 + local_index(sub.a, e.a), 1 + na + local_index(sub.b, e.b), inf});
  }
  const FlowResult flow = max_flow(net);
  out.flow_value = flow.value;

  for (std::uint32_t i = 0; i < na; ++i) {
    const std::uint64_t c = g.a_vertices[sub.a[i]].count;
    if (flow.source_reachable[1 + i]) {
      out.a_plus.push_back(sub.a[i]);
      out.mass_a_plus += c;
    } else {
      out.a_minus.push_back(sub.a[i]);
      out.mass_a_minus += c;
    }
  }
  for (std::uint32_t j = 0; j < nb; ++j) {
    const std::uint64_t c = g.b_vertices[sub.b[j]].count;
    if (flow.source_reachable[1 + na + j]) {
      out.b_minus.push_back(sub.b[j]);
      out.mass_b_minus += c;
    } else {
      out.b_plus.push_back(sub.b[j]);
      out.mass_b_plus += c;
    }
  }

  const unsigned __int128 plus_product =
      static_cast<unsigned __int128>(out.mass_a_plus) * out.mass_b_plus;
  const unsigned __int128 minus_product =
      static_cast<unsigned __int128>(out.mass_a_minus) * out.mass_b_minus;
  if (plus_product < minus_product) {
    fail(ErrorKind::kInternal, "lin_opt: C(A+)C(B+) < C(A-)C(B-) contradicts optimality");
  }
  out.trivial = plus_product <= minus_product;
  if (both && out.trivial != (static_cast<std::uint64_t>(flow.value) >= ca * cb)) {
    fail(ErrorKind::kInternal, "lin_opt: branch test disagrees with flow value");
  }

  // z = x / s with s = N C_A C_B / (C_A + C_B), i.e. x (C_A + C_B) / (N C_A C_B).
  const int128 z_num_scale = both ? static_cast<int128>(ca + cb) : 1;
  const int128 z_den = both ? static_cast<int128>(n_total) * ca * cb : static_cast<int128>(n_total);
  out.scale = both ? Rational(static_cast<int128>(n_total) * ca * cb, static_cast<int128>(ca + cb))
                   : Rational(static_cast<int128>(n_total), 1);
  auto dual = [&](std::int64_t x) { return Rational(z_num_scale * x, z_den); };

  out.z_a.reserve(na);
  for (std::uint32_t i = 0; i < na; ++i) {
    out.z_a.push_back(dual(net.arcs[i].capacity - flow.flow[i]));
  }
  out.z_b.reserve(nb);
  for (std::uint32_t j = 0; j < nb; ++j) {
    out.z_b.push_back(dual(net.arcs[na + j].capacity - flow.flow[na + j]));
  }
  out.z_edges.reserve(sub.edges.size());
  for (std::size_t k = 0; k < sub.edges.size(); ++k) {
    out.z_edges.push_back(dual(flow.flow[na + nb + k]));
  }
  return out;
}

}  // namespace advbound
