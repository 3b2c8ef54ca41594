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

#include "advbound/geometry.hpp"
#include "advbound/rational.hpp"

namespace advbound {

// A vertex-induced piece of a conflict graph. Positions index into
// graph->a_vertices / b_vertices; edge ids index into graph->edges.
struct SubProblem {
  const ConflictGraph* graph = nullptr;
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  std::vector<std::uint32_t> edges;
  std::uint64_t mass_a = 0;  // C_A: sum of counts over a
  std::uint64_t mass_b = 0;  // C_B

  std::uint64_t total_count() const { return graph->total_count; }
  std::size_t num_vertices() const { return a.size() + b.size(); }

  static SubProblem whole(const ConflictGraph& g);
  // Induced on the given positions; edges are filtered from `parent_edges`
  // (ids into g.edges) so only edges with both ends kept survive.
  static SubProblem induced(const ConflictGraph& g, std::vector<std::uint32_t> a,
                            std::vector<std::uint32_t> b,
                            const std::vector<std::uint32_t>& parent_edges);
};

// Outcome of the dual LP pair
//   max r'y  s.t. y >= 0, My <= 1     /     min 1'z  s.t. z >= 0, M'z >= r'
// over the bipartite vertex packing polytope, solved as a min cut.
struct LinOptResult {
  // Support of the optimal 0/1 y (an independent set) and its complement.
  std::vector<std::uint32_t> a_plus, a_minus, b_plus, b_minus;
  std::uint64_t mass_a_plus = 0, mass_a_minus = 0, mass_b_plus = 0, mass_b_minus = 0;

  // Integer LP weights r' = s * r: c_a * C_B on A and c_b * C_A on B (both
  // classes present) or c_v (one class), aligned with sub.a then sub.b.
  std::vector<std::int64_t> scaled_weights;
  // s = N C_A C_B / (C_A + C_B), or N when a class is absent.
  Rational scale;
  std::int64_t flow_value = 0;

  // Dual solution z = (flow or slack) / s, aligned with sub.edges, sub.a, sub.b.
  // Tight: (M'z)_v = r_v for every vertex.
  std::vector<Rational> z_edges, z_a, z_b;

  // True iff C(A+) C(B+) <= C(A-) C(B-): the uniform class-frequency guess
  // is optimal on this piece.
  bool trivial = false;

  // Weight of the independent set under r' (= sum r' - flow value).
  std::int64_t independent_set_weight() const;
};

LinOptResult lin_opt(const SubProblem& sub);

}  // namespace advbound
