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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advbound/dataset.hpp"

namespace advbound {

enum class Norm { kL2, kLinf, kCustom };

std::string to_string(Norm norm);
Norm parse_norm(std::string_view name);

// Gauge of the perturbation set: must be a norm (positively homogeneous,
// symmetric, definite).
using GaugeFunction = std::function<double(std::span<const double>)>;

// The adversary moves x anywhere inside x + eps * Delta, where Delta is the
// unit ball of the chosen norm.
struct NeighborhoodSpec {
  Norm norm = Norm::kL2;
  double eps = 0.0;
  GaugeFunction gauge;  // used only when norm == kCustom

  static NeighborhoodSpec l2(double eps) { return {Norm::kL2, eps, {}}; }
  static NeighborhoodSpec linf(double eps) { return {Norm::kLinf, eps, {}}; }
  static NeighborhoodSpec custom(double eps, GaugeFunction gauge) {
    return {Norm::kCustom, eps, std::move(gauge)};
  }

  void validate() const;
};

// Closed neighborhoods x + eps*Delta and x' + eps*Delta meet iff
// ||x - x'|| <= 2 eps. L2 compares squared distances against (2 eps)^2.
bool neighborhoods_intersect(std::span<const double> x,
                             std::span<const double> x_prime,
                             const NeighborhoodSpec& spec);

struct VertexRef {
  std::uint32_t index;  // row in the source dataset
  std::uint32_t count;

  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

struct Edge {
  std::uint32_t a;  // position in ConflictGraph::a_vertices
  std::uint32_t b;  // position in ConflictGraph::b_vertices

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Bipartite conflict graph: A holds the class +1 support points, B the
// class -1 ones. Edges are sorted by (a, b) and unique.
struct ConflictGraph {
  std::vector<VertexRef> a_vertices;
  std::vector<VertexRef> b_vertices;
  std::vector<Edge> edges;
  std::uint64_t total_count = 0;
  double eps = 0.0;
  Norm norm = Norm::kL2;

  std::size_t num_vertices() const { return a_vertices.size() + b_vertices.size(); }
  std::uint64_t mass_a() const;
  std::uint64_t mass_b() const;

  // Largest N accepted; keeps every scaled capacity and dual numerator in
  // 64 bits.
  static constexpr std::uint64_t kMaxTotalCount = std::uint64_t{1} << 20;

  // Validates structure (bipartite, sorted unique edges, positive counts,
  // N = sum of counts, N <= kMaxTotalCount).
  void validate() const;

  // Same graph with the classes swapped and edges transposed.
  ConflictGraph transposed() const;
};

// Builds a graph directly from vertex counts and edges (tests, tooling).
ConflictGraph make_graph(std::vector<std::uint32_t> counts_a,
                         std::vector<std::uint32_t> counts_b,
                         std::vector<Edge> edges);

struct GraphBuildOptions {
  unsigned threads = 1;
  // Skip pairs whose first coordinates already differ by more than 2 eps.
  // Valid for L2 and Linf (both dominate any single coordinate gap).
  bool prune_first_coordinate = false;
};

ConflictGraph build_conflict_graph(const LabeledDataset& ds,
                                   const NeighborhoodSpec& spec,
                                   const GraphBuildOptions& options = {});

// Count-weighted fraction of (A, B) pairs that conflict. Throws kUndefined if
// either part is empty.
double collision_probability(const ConflictGraph& g);

std::string graph_to_json(const ConflictGraph& g);

}  // namespace advbound
