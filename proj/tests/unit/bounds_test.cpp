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

#include "advbound/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"
#include "support/error_kind.hpp"
#include "support/oracles.hpp"

namespace advbound {
namespace {

using testing::kind_of;

bool has_condition(const CheckReport& report, const std::string& condition) {
  for (const auto& v : report.violations) {
    if (v.condition == condition) return true;
  }
  return false;
}

// Direct evaluation of sum -(c_v / N) ln q_v from floating-point q.
double float_objective(const ConflictGraph& g, const std::vector<double>& qa,
                       const std::vector<double>& qb) {
  double acc = 0.0;
  for (std::size_t i = 0; i < qa.size(); ++i) acc -= g.a_vertices[i].count * std::log(qa[i]);
  for (std::size_t j = 0; j < qb.size(); ++j) acc -= g.b_vertices[j].count * std::log(qb[j]);
  return acc / static_cast<double>(g.total_count);
}

TEST(VerifyTest, DetectsPackingViolation) {
  const auto g = make_graph({1, 1}, {3}, {{1, 0}});
  auto cert = solve_bound(g);
  ASSERT_TRUE(verify_certificate(g, cert).passed());
  cert.q_a[1] = cert.q_a[1] + Rational(1, 1000);
  const auto report = verify_certificate(g, cert);
  EXPECT_TRUE(has_condition(report, "edge_packing"));
  EXPECT_TRUE(has_condition(report, "block_q"));
  const auto j = nlohmann::json::parse(report_to_json(report));
  EXPECT_FALSE(j["passed"].get<bool>());
}

TEST(VerifyTest, DetectsMissingCover) {
  const auto g = make_graph({1}, {1}, {{0, 0}});
  auto cert = solve_bound(g);
  cert.z_edges[0] = Rational(0);
  cert.z_a[0] = Rational(0);
  EXPECT_TRUE(has_condition(verify_certificate(g, cert), "cover"));
}

TEST(VerifyTest, DetectsNegativeDualAndOversizedSum) {
  const auto g = make_graph({1}, {1}, {{0, 0}});
  auto cert = solve_bound(g);
  cert.z_a[0] = Rational(-1, 7);
  EXPECT_TRUE(has_condition(verify_certificate(g, cert), "z_nonneg"));
  cert.z_a[0] = Rational(5);
  EXPECT_TRUE(has_condition(verify_certificate(g, cert), "dual_sum"));
}

TEST(VerifyTest, DetectsBlockDisorder) {
  const auto g = make_graph({1, 1}, {3}, {{1, 0}});
  auto cert = solve_bound(g);
  std::swap(cert.blocks[0], cert.blocks[1]);
  const auto report = verify_certificate(g, cert);
  EXPECT_TRUE(has_condition(report, "block_order"));
  EXPECT_TRUE(has_condition(report, "block_partition"));
}

TEST(VerifyTest, ShapeMismatchThrows) {
  const auto g = make_graph({1}, {1}, {{0, 0}});
  auto cert = solve_bound(g);
  cert.q_b.push_back(Rational(1));
  EXPECT_EQ(kind_of([&] { verify_certificate(g, cert); }), ErrorKind::kDimension);
}

TEST(CrossEntropyTest, MatchesDefinition) {
  const auto g = make_graph({1, 1}, {3}, {{1, 0}});
  const auto cert = solve_bound(g);
  const double expected = (std::log(4.0) + 3.0 * std::log(4.0 / 3.0)) / 5.0;
  EXPECT_NEAR(cross_entropy_value(cert, g), expected, 1e-15);
  auto zeroed = cert;
  zeroed.q_a[0] = Rational(0);
  EXPECT_EQ(cross_entropy_value(zeroed, g), std::numeric_limits<double>::infinity());
}

TEST(ZeroOneTest, HandExamples) {
  const auto pair = make_graph({1}, {1}, {{0, 0}});
  const auto z_pair = zero_one_bound(solve_bound(pair), pair);
  EXPECT_EQ(z_pair.loss, Rational(1, 2));
  EXPECT_TRUE(z_pair.correct_a[0]);
  EXPECT_FALSE(z_pair.correct_b[0]);

  const auto empty = make_graph({2}, {3}, {});
  EXPECT_EQ(zero_one_bound(solve_bound(empty), empty).loss, Rational(0));

  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < 2; ++i)
    for (std::uint32_t j = 0; j < 3; ++j) edges.push_back({i, j});
  const auto complete = make_graph({1, 1}, {1, 1, 1}, edges);
  EXPECT_EQ(zero_one_bound(solve_bound(complete), complete).loss, Rational(2, 5));
}

TEST(ZeroOneTest, FeasibleAndOptimalOnSmallGraphs) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t na = 1 + trial % 6;
    const std::size_t nb = 1 + (trial / 6) % 6;
    const auto g = testing::random_graph(rng, na, nb, 4, 0.1 + 0.1 * (trial % 8));
    const auto zo = zero_one_bound(solve_bound(g), g);
    for (const auto& e : g.edges) EXPECT_FALSE(zo.correct_a[e.a] && zo.correct_b[e.b]);
    EXPECT_EQ(zo.loss, Rational(static_cast<int128>(testing::brute_force_zero_one_errors(g)),
                                static_cast<int128>(g.total_count)))
        << "trial " << trial;
  }
}

TEST(FrankWolfeTest, SinglePair) {
  const auto g = make_graph({1}, {1}, {{0, 0}});
  const auto fw = frank_wolfe_reference(g);
  EXPECT_TRUE(fw.converged);
  EXPECT_NEAR(fw.objective, std::log(2.0), 1e-6);
  EXPECT_NEAR(fw.q_a[0], 0.5, 1e-6);
}

TEST(FrankWolfeTest, HeavyNeighborExample) {
  const auto g = make_graph({1, 1}, {3}, {{1, 0}});
  const auto fw = frank_wolfe_reference(g);
  EXPECT_NEAR(fw.objective, 0.4499, 1e-3);
  EXPECT_NEAR(fw.objective, solve_bound(g).objective_nats, 1e-5);
}

TEST(FrankWolfeTest, EdgelessGoesToOne) {
  const auto g = make_graph({2, 1}, {3}, {});
  const auto fw = frank_wolfe_reference(g);
  EXPECT_TRUE(fw.converged);
  EXPECT_NEAR(fw.objective, 0.0, 1e-6);
  for (double q : fw.q_a) EXPECT_NEAR(q, 1.0, 1e-9);
}

TEST(FrankWolfeTest, SandwichesExactObjective) {
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_graph(rng, 2 + trial % 9, 2 + (trial / 9) % 9, 6, 0.35);
    const double exact = solve_bound(g).objective_nats;
    FrankWolfeOptions options;
    options.gap_tol = 1e-6;
    const auto fw = frank_wolfe_reference(g, options);
    // FW iterates are feasible: packing holds and the objective is recomputable.
    for (const auto& e : g.edges) EXPECT_LE(fw.q_a[e.a] + fw.q_b[e.b], 1.0 + 1e-12);
    EXPECT_NEAR(fw.objective, float_objective(g, fw.q_a, fw.q_b), 1e-12);
    EXPECT_GE(fw.objective, exact - 1e-12) << "trial " << trial;
    if (fw.converged) EXPECT_LE(fw.objective, exact + options.gap_tol + 1e-12) << "trial " << trial;
  }
}

TEST(FrankWolfeTest, StopTokenHaltsEarly) {
  std::mt19937_64 rng(3);
  const auto g = testing::random_graph(rng, 8, 8, 3, 0.4);
  std::stop_source source;
  source.request_stop();
  FrankWolfeOptions options;
  options.stop = source.get_token();
  const auto fw = frank_wolfe_reference(g, options);
  EXPECT_FALSE(fw.converged);
  EXPECT_EQ(fw.iterations, 0u);
}

}  // namespace
}  // namespace advbound
