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

#include "advbound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "json.hpp"

#include "advbound/error.hpp"

namespace advbound {
namespace {

double squared_l2(const double* x, const double* y, std::size_t d) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = x[k] - y[k];
    acc += diff * diff;
  }
  return acc;
}

double linf(const double* x, const double* y, std::size_t d) {
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) acc = std::max(acc, std::abs(x[k] - y[k]));
  return acc;
}

class PairTest {
 public:
  PairTest(const NeighborhoodSpec& spec, std::size_t dim)
      : spec_(spec), dim_(dim), radius_(2.0 * spec.eps), radius_sq_(radius_ * radius_),
        diff_(spec.norm == Norm::kCustom ? dim : 0) {}

  bool operator()(const double* x, const double* y) {
    switch (spec_.norm) {
      case Norm::kL2: return squared_l2(x, y, dim_) <= radius_sq_;
      case Norm::kLinf: return linf(x, y, dim_) <= radius_;
      case Norm::kCustom:
        for (std::size_t k = 0; k < dim_; ++k) diff_[k] = x[k] - y[k];
        return spec_.gauge(diff_) <= radius_;
    }
    return false;
  }

 private:
  const NeighborhoodSpec& spec_;
  std::size_t dim_;
  double radius_;
  double radius_sq_;
  std::vector<double> diff_;
};

}  // namespace

std::string to_string(Norm norm) {
  switch (norm) {
    case Norm::kL2: return "l2";
    case Norm::kLinf: return "linf";
    case Norm::kCustom: return "custom";
  }
  return "unknown";
}

Norm parse_norm(std::string_view name) {
  if (name == "l2" || name == "L2") return Norm::kL2;
  if (name == "linf" || name == "LINF" || name == "Linf") return Norm::kLinf;
  fail(ErrorKind::kUsage, "unknown norm '" + std::string(name) + "' (expected l2 or linf)");
}

void NeighborhoodSpec::validate() const {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    fail(ErrorKind::kUsage, "eps must be finite and nonnegative");
  }
  if (norm == Norm::kCustom && !gauge) fail(ErrorKind::kUsage, "custom norm without gauge");
}

bool neighborhoods_intersect(std::span<const double> x, std::span<const double> x_prime,
                             const NeighborhoodSpec& spec) {
  if (x.size() != x_prime.size()) {
    fail(ErrorKind::kDimension, "points have different dimensions");
  }
  spec.validate();
  PairTest test(spec, x.size());
  return test(x.data(), x_prime.data());
}

std::uint64_t ConflictGraph::mass_a() const {
  std::uint64_t m = 0;
  for (const auto& v : a_vertices) m += v.count;
  return m;
}

std::uint64_t ConflictGraph::mass_b() const {
  std::uint64_t m = 0;
  for (const auto& v : b_vertices) m += v.count;
  return m;
}

void ConflictGraph::validate() const {
  for (const auto& v : a_vertices) {
    if (v.count == 0) fail(ErrorKind::kFormat, "vertex with zero count");
  }
  for (const auto& v : b_vertices) {
    if (v.count == 0) fail(ErrorKind::kFormat, "vertex with zero count");
  }
  if (mass_a() + mass_b() != total_count) {
    fail(ErrorKind::kFormat, "total count does not match vertex counts");
  }
  if (total_count > kMaxTotalCount) {
    fail(ErrorKind::kOverflow, "total count " + std::to_string(total_count) +
                                   " exceeds 2^20; exact flow capacities would overflow");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].a >= a_vertices.size() || edges[i].b >= b_vertices.size()) {
      fail(ErrorKind::kFormat, "edge endpoint out of range");
    }
    if (i > 0 && !(edges[i - 1] < edges[i])) {
      fail(ErrorKind::kFormat, "edges must be sorted and unique");
    }
  }
}

ConflictGraph ConflictGraph::transposed() const {
  ConflictGraph t;
  t.a_vertices = b_vertices;
  t.b_vertices = a_vertices;
  t.total_count = total_count;
  t.eps = eps;
  t.norm = norm;
  t.edges.reserve(edges.size());
  for (const auto& e : edges) t.edges.push_back({e.b, e.a});
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

ConflictGraph make_graph(std::vector<std::uint32_t> counts_a, std::vector<std::uint32_t> counts_b,
                         std::vector<Edge> edges) {
  ConflictGraph g;
  for (std::uint32_t i = 0; i < counts_a.size(); ++i) g.a_vertices.push_back({i, counts_a[i]});
  for (std::uint32_t j = 0; j < counts_b.size(); ++j) {
    g.b_vertices.push_back({static_cast<std::uint32_t>(counts_a.size() + j), counts_b[j]});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  g.total_count = g.mass_a() + g.mass_b();
  g.validate();
  return g;
}

ConflictGraph build_conflict_graph(const LabeledDataset& ds, const NeighborhoodSpec& spec,
                                   const GraphBuildOptions& options) {
  spec.validate();
  ConflictGraph g;
  g.eps = spec.eps;
  g.norm = spec.norm;
  g.total_count = ds.total_count();
  const std::size_t d = ds.dim();
  std::vector<double> a_rows;
  std::vector<double> b_rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto row = ds.row(i);
    const VertexRef ref{static_cast<std::uint32_t>(i), ds.count(i)};
    if (ds.label(i) == Label::kPlus) {
      g.a_vertices.push_back(ref);
      a_rows.insert(a_rows.end(), row.begin(), row.end());
    } else {
      g.b_vertices.push_back(ref);
      b_rows.insert(b_rows.end(), row.begin(), row.end());
    }
  }
  if (g.total_count > ConflictGraph::kMaxTotalCount) g.validate();

  const std::size_t n_a = g.a_vertices.size();
  const std::size_t n_b = g.b_vertices.size();
  const bool prune = options.prune_first_coordinate && spec.norm != Norm::kCustom;
  std::vector<std::uint32_t> b_order(n_b);
  std::iota(b_order.begin(), b_order.end(), 0u);
  std::vector<double> b_key;
  if (prune) {
    std::stable_sort(b_order.begin(), b_order.end(), [&](std::uint32_t x, std::uint32_t y) {
      return b_rows[x * d] < b_rows[y * d];
    });
    b_key.reserve(n_b);
    for (auto j : b_order) b_key.push_back(b_rows[j * d]);
  }

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(std::max<std::size_t>(n_a, 1))));
  std::vector<std::vector<Edge>> chunks(workers);
  auto work = [&](unsigned w) {
    PairTest test(spec, d);
    const std::size_t lo = n_a * w / workers;
    const std::size_t hi = n_a * (w + 1) / workers;
    auto& out = chunks[w];
    std::vector<std::uint32_t> hits;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* x = a_rows.data() + i * d;
      if (!prune) {
        for (std::size_t j = 0; j < n_b; ++j) {
          if (test(x, b_rows.data() + j * d)) {
            out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
          }
        }
        continue;
      }
      // Window widened by a few ulps; the exact test below decides ties.
      const double r = 2.0 * spec.eps;
      const double slack = 1e-12 * (std::abs(x[0]) + r);
      auto first = std::lower_bound(b_key.begin(), b_key.end(), x[0] - r - slack);
      hits.clear();
      for (auto it = first; it != b_key.end() && *it <= x[0] + r + slack; ++it) {
        const std::uint32_t j = b_order[static_cast<std::size_t>(it - b_key.begin())];
        if (test(x, b_rows.data() + static_cast<std::size_t>(j) * d)) hits.push_back(j);
      }
      std::sort(hits.begin(), hits.end());
      for (auto j : hits) out.push_back({static_cast<std::uint32_t>(i), j});
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  g.edges.reserve(total);
  for (auto& c : chunks) g.edges.insert(g.edges.end(), c.begin(), c.end());
  g.validate();
  return g;
}

double collision_probability(const ConflictGraph& g) {
  const std::uint64_t ca = g.mass_a();
  const std::uint64_t cb = g.mass_b();
  if (ca == 0 || cb == 0) {
    fail(ErrorKind::kUndefined, "collision probability needs both classes present");
  }
  unsigned __int128 hits = 0;
  for (const auto& e : g.edges) {
    hits += static_cast<unsigned __int128>(g.a_vertices[e.a].count) * g.b_vertices[e.b].count;
  }
  return static_cast<double>(hits) / (static_cast<double>(ca) * static_cast<double>(cb));
}

std::string graph_to_json(const ConflictGraph& g) {
  nlohmann::json j;
  j["n_a"] = g.a_vertices.size();
  j["n_b"] = g.b_vertices.size();
  auto counts = [](const std::vector<VertexRef>& vs) {
    std::vector<std::uint32_t> c;
    c.reserve(vs.size());
    for (const auto& v : vs) c.push_back(v.count);
    return c;
  };
  j["counts_a"] = counts(g.a_vertices);
  j["counts_b"] = counts(g.b_vertices);
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.a, e.b});
  j["edges"] = std::move(edges);
  j["eps"] = g.eps;
  j["norm"] = to_string(g.norm);
  return j.dump();
}

}  // namespace advbound
