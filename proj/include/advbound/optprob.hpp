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
#include <stop_token>
#include <string>
#include <vector>

#include "advbound/geometry.hpp"
#include "advbound/linopt.hpp"
#include "advbound/rational.hpp"

namespace advbound {

// Vertices sharing one optimal probability. Within block i every A vertex has
// q = ratio and every B vertex has q = 1 - ratio, where
// ratio = C(A_i) / (C(A_i) + C(B_i)).
struct Block {
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  std::uint64_t mass_a = 0;
  std::uint64_t mass_b = 0;
  Rational ratio;
};

inline constexpr std::uint32_t kNoBlock = UINT32_MAX;

// Optimal correct-classification probabilities q and the adversarial
// strategy z that certifies them. Vectors are indexed by graph position
// (q_a, z_a, block_of_a by A position, ...), z_edges by graph edge id.
// Entries outside the solved subproblem stay zero / kNoBlock.
struct BoundCertificate {
  std::vector<Rational> q_a, q_b;
  std::vector<Rational> z_edges, z_a, z_b;
  std::vector<Block> blocks;  // ratios nondecreasing
  std::vector<std::uint32_t> block_of_a, block_of_b;
  double objective_nats = 0.0;
};

struct OptProbStats {
  std::size_t linopt_calls = 0;
  std::size_t components = 0;
  std::size_t max_pending = 0;  // deepest explicit work stack seen
  double flow_seconds = 0.0;    // time spent inside lin_opt
  double total_seconds = 0.0;
};

struct OptProbOptions {
  // Solve connected components independently (same q, faster).
  bool decompose = true;
  unsigned threads = 1;
  std::stop_token stop;  // checked between lin_opt calls; throws kCancelled
};

// Recursive splitting on the lin_opt answer, run on an explicit stack.
// Blocks come out in the order (A-, B+) branch first, then (A+, B-).
BoundCertificate opt_prob(const SubProblem& sub, OptProbStats* stats = nullptr,
                          std::stop_token stop = {});

// Full pipeline on a graph: optional component split, per-component
// opt_prob, blocks merged by ratio (stable), objective in nats.
BoundCertificate solve_bound(const ConflictGraph& g, const OptProbOptions& options = {},
                             OptProbStats* stats = nullptr);

// Connected components with at least one edge, followed by one group of the
// isolated A vertices and one of the isolated B vertices (when present).
std::vector<SubProblem> decompose_components(const SubProblem& sub);

// sum over v of -(c_v / N) ln q_v, from the block structure.
double block_objective(const std::vector<Block>& blocks, std::uint64_t total_count);

std::string certificate_to_json(const BoundCertificate& cert);

}  // namespace advbound
