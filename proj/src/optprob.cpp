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

#include "advbound/optprob.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "advbound/error.hpp"

namespace advbound {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

BoundCertificate empty_certificate(const ConflictGraph& g) {
  BoundCertificate cert;
  cert.q_a.assign(g.a_vertices.size(), Rational(0));
  cert.q_b.assign(g.b_vertices.size(), Rational(0));
  cert.z_a.assign(g.a_vertices.size(), Rational(0));
  cert.z_b.assign(g.b_vertices.size(), Rational(0));
  cert.z_edges.assign(g.edges.size(), Rational(0));
  cert.block_of_a.assign(g.a_vertices.size(), kNoBlock);
  cert.block_of_b.assign(g.b_vertices.size(), kNoBlock);
  return cert;
}

// Writes q and z for every vertex and edge of `sub` into `cert` and appends
// its blocks in recursion order. Touches no entry outside `sub`.
void solve_into(const SubProblem& sub, BoundCertificate& cert, std::vector<Block>& blocks,
                OptProbStats& stats, const std::stop_token& stop) {
  if (sub.mass_a + sub.mass_b == 0) {
    if (sub.num_vertices() == 0) return;
    fail(ErrorKind::kUsage, "opt_prob on a subproblem without mass");
  }
  std::vector<SubProblem> pending;
  pending.push_back(sub);
  while (!pending.empty()) {
    if (stop.stop_requested()) fail(ErrorKind::kCancelled, "opt_prob cancelled");
    stats.max_pending = std::max(stats.max_pending, pending.size());
    SubProblem cur = std::move(pending.back());
    pending.pop_back();

    const auto t0 = Clock::now();
    LinOptResult lin = lin_opt(cur);
    stats.flow_seconds += seconds_since(t0);
    ++stats.linopt_calls;

    if (lin.trivial) {
      const std::uint64_t mass = cur.mass_a + cur.mass_b;
      const Rational ratio(static_cast<int128>(cur.mass_a), static_cast<int128>(mass));
      const Rational complement(static_cast<int128>(cur.mass_b), static_cast<int128>(mass));
      for (std::size_t i = 0; i < cur.a.size(); ++i) {
        cert.q_a[cur.a[i]] = ratio;
        cert.z_a[cur.a[i]] = lin.z_a[i];
      }
      for (std::size_t j = 0; j < cur.b.size(); ++j) {
        cert.q_b[cur.b[j]] = complement;
        cert.z_b[cur.b[j]] = lin.z_b[j];
      }
      for (std::size_t k = 0; k < cur.edges.size(); ++k) {
        cert.z_edges[cur.edges[k]] = lin.z_edges[k];
      }
      blocks.push_back(Block{std::move(cur.a), std::move(cur.b), cur.mass_a, cur.mass_b, ratio});
      continue;
    }

    const ConflictGraph& g = *cur.graph;
    SubProblem first = SubProblem::induced(g, std::move(lin.a_plus), std::move(lin.b_minus), cur.edges);
    SubProblem second = SubProblem::induced(g, std::move(lin.a_minus), std::move(lin.b_plus), cur.edges);
    // A+ and B+ are both nonempty on this branch, so each side shrinks.
    if (first.num_vertices() >= cur.num_vertices() || second.num_vertices() >= cur.num_vertices() ||
        first.mass_a + first.mass_b == 0 || second.mass_a + second.mass_b == 0) {
      fail(ErrorKind::kInternal, "opt_prob: recursive split made no progress");
    }
    // LIFO: the (A-, B+) branch is solved (and numbered) first.
    pending.push_back(std::move(first));
    pending.push_back(std::move(second));
  }
}

void finalize(BoundCertificate& cert, const ConflictGraph& g) {
  for (std::uint32_t i = 0; i < cert.blocks.size(); ++i) {
    for (auto p : cert.blocks[i].a) cert.block_of_a[p] = i;
    for (auto p : cert.blocks[i].b) cert.block_of_b[p] = i;
  }
  cert.objective_nats = block_objective(cert.blocks, g.total_count);
}

}  // namespace

double block_objective(const std::vector<Block>& blocks, std::uint64_t total_count) {
  double acc = 0.0;
  for (const auto& blk : blocks) {
    const double mass = static_cast<double>(blk.mass_a + blk.mass_b);
    if (blk.mass_a > 0) {
      acc += static_cast<double>(blk.mass_a) * std::log(mass / static_cast<double>(blk.mass_a));
    }
    if (blk.mass_b > 0) {
      acc += static_cast<double>(blk.mass_b) * std::log(mass / static_cast<double>(blk.mass_b));
    }
  }
  return acc / static_cast<double>(total_count);
}

BoundCertificate opt_prob(const SubProblem& sub, OptProbStats* stats, std::stop_token stop) {
  if (sub.graph == nullptr) fail(ErrorKind::kUsage, "subproblem without a graph");
  const auto t0 = Clock::now();
  OptProbStats local;
  BoundCertificate cert = empty_certificate(*sub.graph);
  solve_into(sub, cert, cert.blocks, local, stop);
  finalize(cert, *sub.graph);
  local.components = 1;
  local.total_seconds = seconds_since(t0);
  if (stats) *stats = local;
  return cert;
}

std::vector<SubProblem> decompose_components(const SubProblem& sub) {
  const ConflictGraph& g = *sub.graph;
  const std::size_t na = sub.a.size();
  const std::size_t nb = sub.b.size();
  std::vector<std::uint32_t> parent(na + nb);
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<bool> touched(na + nb, false);
  std::vector<std::uint32_t> edge_a(sub.edges.size());
  for (std::size_t k = 0; k < sub.edges.size(); ++k) {
    const Edge& e = g.edges[sub.edges[k]];
    const auto ia = static_cast<std::uint32_t>(
        std::lower_bound(sub.a.begin(), sub.a.end(), e.a) - sub.a.begin());
    const auto ib = static_cast<std::uint32_t>(
        na + (std::lower_bound(sub.b.begin(), sub.b.end(), e.b) - sub.b.begin()));
    edge_a[k] = ia;
    touched[ia] = touched[ib] = true;
    const auto ra = find(ia);
    const auto rb = find(ib);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  // Components numbered by their smallest member (A positions first).
  std::vector<std::uint32_t> slot(na + nb, kNoBlock);
  std::vector<SubProblem> out;
  SubProblem lonely_a, lonely_b;
  lonely_a.graph = lonely_b.graph = &g;
  for (std::uint32_t v = 0; v < na + nb; ++v) {
    const bool is_a = v < na;
    const std::uint32_t pos = is_a ? sub.a[v] : sub.b[v - na];
    const std::uint64_t c = is_a ? g.a_vertices[pos].count : g.b_vertices[pos].count;
    if (!touched[v]) {
      SubProblem& grp = is_a ? lonely_a : lonely_b;
      (is_a ? grp.a : grp.b).push_back(pos);
      (is_a ? grp.mass_a : grp.mass_b) += c;
      continue;
    }
    const std::uint32_t root = find(v);
    if (slot[root] == kNoBlock) {
      slot[root] = static_cast<std::uint32_t>(out.size());
      out.emplace_back().graph = &g;
    }
    SubProblem& comp = out[slot[root]];
    (is_a ? comp.a : comp.b).push_back(pos);
    (is_a ? comp.mass_a : comp.mass_b) += c;
  }
  for (std::size_t k = 0; k < sub.edges.size(); ++k) {
    out[slot[find(edge_a[k])]].edges.push_back(sub.edges[k]);
  }
  if (!lonely_a.a.empty()) out.push_back(std::move(lonely_a));
  if (!lonely_b.b.empty()) out.push_back(std::move(lonely_b));
  return out;
}

BoundCertificate solve_bound(const ConflictGraph& g, const OptProbOptions& options,
                             OptProbStats* stats) {
  g.validate();
  const auto t0 = Clock::now();
  const SubProblem whole = SubProblem::whole(g);
  if (whole.mass_a + whole.mass_b == 0) fail(ErrorKind::kEmptyDataset, "graph has no vertices");

  std::vector<SubProblem> parts;
  if (options.decompose) {
    parts = decompose_components(whole);
  } else {
    parts.push_back(whole);
  }

  BoundCertificate cert = empty_certificate(g);
  std::vector<std::vector<Block>> part_blocks(parts.size());
  std::vector<OptProbStats> part_stats(parts.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(options.threads, static_cast<unsigned>(parts.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      solve_into(parts[i], cert, part_blocks[i], part_stats[i], options.stop);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
      for (std::size_t i = next++; i < parts.size(); i = next++) {
        try {
          solve_into(parts[i], cert, part_blocks[i], part_stats[i], options.stop);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
  }

  // Within one component ratios are already nondecreasing; a stable sort by
  // ratio keeps that order and interleaves components consistently.
  for (auto& blocks : part_blocks) {
    for (auto& blk : blocks) cert.blocks.push_back(std::move(blk));
  }
  std::stable_sort(cert.blocks.begin(), cert.blocks.end(),
                   [](const Block& x, const Block& y) { return x.ratio < y.ratio; });
  finalize(cert, g);

  if (stats) {
    OptProbStats total;
    for (const auto& s : part_stats) {
      total.linopt_calls += s.linopt_calls;
      total.flow_seconds += s.flow_seconds;
      total.max_pending = std::max(total.max_pending, s.max_pending);
    }
    total.components = parts.size();
    total.total_seconds = seconds_since(t0);
    *stats = total;
  }
  return cert;
}

std::string certificate_to_json(const BoundCertificate& cert) {
  using nlohmann::json;
  auto pairs = [](const std::vector<Rational>& v) {
    json arr = json::array();
    for (const auto& r : v) arr.push_back({r.num(), r.den()});
    return arr;
  };
  std::vector<Rational> q = cert.q_a;
  q.insert(q.end(), cert.q_b.begin(), cert.q_b.end());
  std::vector<Rational> zv = cert.z_a;
  zv.insert(zv.end(), cert.z_b.begin(), cert.z_b.end());
  json blocks = json::array();
  for (const auto& blk : cert.blocks) {
    blocks.push_back({{"a", blk.a},
                      {"b", blk.b},
                      {"mass_a", blk.mass_a},
                      {"mass_b", blk.mass_b},
                      {"ratio", {blk.ratio.num(), blk.ratio.den()}}});
  }
  json j;
  j["q"] = pairs(q);
  j["z_edges"] = pairs(cert.z_edges);
  j["z_vertices"] = pairs(zv);
  j["blocks"] = std::move(blocks);
  j["objective_nats"] = cert.objective_nats;
  return j.dump();
}

}  // namespace advbound
