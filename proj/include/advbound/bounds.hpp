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
#include "advbound/optprob.hpp"
#include "advbound/rational.hpp"

namespace advbound {

struct Violation {
  std::string condition;  // e.g. "edge_packing", "cover", "block_order"
  std::string element;    // "a:3", "b:0", "edge:12", "block:2", "global"
  ExactRational lhs;
  ExactRational rhs;
};

struct CheckReport {
  std::vector<Violation> violations;
  bool passed() const { return violations.empty(); }
};

// Checks, in exact rational arithmetic, the optimality conditions
//   q >= 0, q <= 1, q_u + q_v <= 1 on edges, z >= 0,
//   q_v (M'z)_v >= p_v, 1'z <= 1'p
// plus the block structure: blocks partition the vertices with positive mass,
// q follows the block ratio, ratios are nondecreasing and every edge (u, v)
// has block(u) <= block(v). Throws kDimension if the certificate does not
// match the graph's shape.
CheckReport verify_certificate(const ConflictGraph& g, const BoundCertificate& cert);

std::string report_to_json(const CheckReport& report);

// sum over v of -(c_v / N) ln q_v in nats; +inf if some q_v = 0 with c_v > 0.
double cross_entropy_value(const BoundCertificate& cert, const ConflictGraph& g);

struct ZeroOneBound {
  Rational loss;  // exact fraction of mass misclassified
  std::vector<bool> correct_a, correct_b;

  double value() const { return loss.to_double(); }
};

// Hard labels from q: correct iff q > 1/2, or q == 1/2 on the +1 side.
ZeroOneBound zero_one_bound(const BoundCertificate& cert, const ConflictGraph& g);

struct FrankWolfeResult {
  std::vector<double> q_a, q_b;
  double objective = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // gap <= gap_tol
};

struct FrankWolfeOptions {
  double gap_tol = 1e-6;
  std::size_t max_iters = 100000;
  double line_search_tol = 1e-12;
  std::stop_token stop;  // polled once per iteration; stops with converged = false
};

// Conditional-gradient reference solver (with away steps) for the same
// convex program, started at q = 1/2. Its linear minimization oracle is a
// max-weight independent set with weights p_v / q_v, solved by a
// floating-point max-flow; `gap` is the Frank-Wolfe duality gap.
FrankWolfeResult frank_wolfe_reference(const ConflictGraph& g, const FrankWolfeOptions& options = {});

}  // namespace advbound
